#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <vector>

namespace liejets {

// Exponent vector in N^d.  Used both for polynomial monomials in the base
// variables and for PBW monomials e^a = e_1^{a_1} ... e_d^{a_d}.
using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

inline bool is_zero_index(const MultiIndex& a) {
  return std::all_of(a.begin(), a.end(), [](int v) { return v == 0; });
}

// Graded order: lower total degree first; within a degree, indices with weight
// concentrated on earlier slots come first, e.g. (2,0) < (1,1) < (0,2).
struct GradedIndexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

inline bool index_equal(const MultiIndex& a, const MultiIndex& b) {
  return a == b;
}

inline MultiIndex index_add(const MultiIndex& a, const MultiIndex& b) {
  assert(a.size() == b.size());
  MultiIndex r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// Componentwise a <= b.
inline bool index_leq(const MultiIndex& a, const MultiIndex& b) {
  assert(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline MultiIndex index_sub(const MultiIndex& a, const MultiIndex& b) {
  assert(index_leq(b, a));
  MultiIndex r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline MultiIndex unit_index(int d, int i) {
  MultiIndex r(static_cast<size_t>(d), 0);
  r[static_cast<size_t>(i)] = 1;
  return r;
}

inline void enumerate_degree(int d, int n, MultiIndex& cur, int slot,
                             std::vector<MultiIndex>& out) {
  if (slot == d - 1) {
    cur[static_cast<size_t>(slot)] = n;
    out.push_back(cur);
    return;
  }
  for (int v = n; v >= 0; --v) {
    cur[static_cast<size_t>(slot)] = v;
    enumerate_degree(d, n - v, cur, slot + 1, out);
  }
}

// All indices of exact total degree n, in GradedIndexLess order.
inline std::vector<MultiIndex> indices_of_degree(int d, int n) {
  assert(d >= 1 && n >= 0);
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<size_t>(d), 0);
  enumerate_degree(d, n, cur, 0, out);
  return out;
}

// All indices of total degree <= maxdeg, in GradedIndexLess order.
inline std::vector<MultiIndex> indices_up_to(int d, int maxdeg) {
  std::vector<MultiIndex> out;
  for (int n = 0; n <= maxdeg; ++n) {
    auto layer = indices_of_degree(d, n);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// Tuples of multi-indices (keys for tensor factors / chain slots).
using IndexTuple = std::vector<MultiIndex>;

struct TupleLess {
  bool operator()(const IndexTuple& a, const IndexTuple& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    GradedIndexLess less;
    for (size_t i = 0; i < a.size(); ++i) {
      if (less(a[i], b[i])) return true;
      if (less(b[i], a[i])) return false;
    }
    return false;
  }
};

}  // namespace liejets
