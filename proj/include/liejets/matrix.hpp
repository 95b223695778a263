#pragma once

#include <cassert>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "liejets/errors.hpp"
#include "liejets/polynomial.hpp"
#include "liejets/rational.hpp"

namespace liejets {

template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(size_t rows, size_t cols, const T& zero)
      : rows_(rows), cols_(cols), data_(rows * cols, zero) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  T& at(size_t i, size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& at(size_t i, size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  size_t rows_, cols_;
  std::vector<T> data_;
};

inline Matrix<Polynomial> poly_identity(size_t n, int nvars) {
  Matrix<Polynomial> m(n, n, Polynomial(nvars));
  for (size_t i = 0; i < n; ++i) m.at(i, i) = Polynomial::constant(nvars, 1);
  return m;
}

// Gaussian elimination over Q[y] restricted to the class of systems this
// library produces: at every step some remaining row has a nonzero *constant*
// entry in the pivot column (true for the degree-graded triangular matrices
// built here).  Anything else throws SingularError.  Solves A*X = B.
// If det_out is non-null it receives det(A), which for this pivot class is a
// nonzero rational.
inline Matrix<Polynomial> poly_solve(const Matrix<Polynomial>& a_in,
                                     const Matrix<Polynomial>& b_in,
                                     Rational* det_out = nullptr) {
  assert(a_in.rows() == a_in.cols());
  assert(b_in.rows() == a_in.rows());
  const size_t n = a_in.rows();
  const size_t k = b_in.cols();
  Matrix<Polynomial> a = a_in;
  Matrix<Polynomial> b = b_in;
  Rational det(1);
  std::vector<Rational> pivots(n, Rational(0));
  for (size_t col = 0; col < n; ++col) {
    size_t pr = n;
    for (size_t r = col; r < n; ++r) {
      const Polynomial& e = a.at(r, col);
      if (!e.is_zero() && e.is_constant()) {
        pr = r;
        break;
      }
    }
    if (pr == n) throw SingularError("singular system");
    if (pr != col) {
      for (size_t j = col; j < n; ++j) std::swap(a.at(col, j), a.at(pr, j));
      for (size_t j = 0; j < k; ++j) std::swap(b.at(col, j), b.at(pr, j));
      det = -det;
    }
    const Rational piv = a.at(col, col).constant_term();
    pivots[col] = piv;
    det *= piv;
    for (size_t r = col + 1; r < n; ++r) {
      const Polynomial factor = a.at(r, col);
      if (factor.is_zero()) continue;
      const Polynomial scale = factor * Rational(Rational(1) / piv);
      for (size_t j = col; j < n; ++j) a.at(r, j) -= scale * a.at(col, j);
      for (size_t j = 0; j < k; ++j) b.at(r, j) -= scale * b.at(col, j);
    }
  }
  if (det_out) *det_out = det;
  const int nvars = n > 0 ? a.at(0, 0).nvars() : 0;
  Matrix<Polynomial> x(n, k, Polynomial(nvars));
  for (size_t j = 0; j < k; ++j) {
    for (size_t ri = n; ri-- > 0;) {
      Polynomial acc = b.at(ri, j);
      for (size_t c = ri + 1; c < n; ++c) acc -= a.at(ri, c) * x.at(c, j);
      x.at(ri, j) = acc * Rational(Rational(1) / pivots[ri]);
    }
  }
  return x;
}

inline Matrix<Polynomial> poly_inverse(const Matrix<Polynomial>& a,
                                       Rational* det_out = nullptr) {
  const int nvars = a.rows() > 0 ? a.at(0, 0).nvars() : 0;
  return poly_solve(a, poly_identity(a.rows(), nvars), det_out);
}

inline Rational poly_det(const Matrix<Polynomial>& a) {
  Rational det(0);
  if (a.rows() == 0) return Rational(1);
  const int nvars = a.at(0, 0).nvars();
  poly_solve(a, Matrix<Polynomial>(a.rows(), 0, Polynomial(nvars)), &det);
  return det;
}

inline Matrix<Polynomial> poly_mul(const Matrix<Polynomial>& a,
                                   const Matrix<Polynomial>& b) {
  assert(a.cols() == b.rows());
  const int nvars =
      a.rows() > 0 && a.cols() > 0 ? a.at(0, 0).nvars()
                                   : (b.rows() > 0 && b.cols() > 0 ? b.at(0, 0).nvars() : 0);
  Matrix<Polynomial> r(a.rows(), b.cols(), Polynomial(nvars));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t t = 0; t < a.cols(); ++t) {
      if (a.at(i, t).is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j) {
        if (b.at(t, j).is_zero()) continue;
        r.at(i, j) += a.at(i, t) * b.at(t, j);
      }
    }
  return r;
}

// Exact rank over Q by fraction-free integer elimination on sparse rows:
// denominators cleared per row, cross-multiplication updates, gcd
// normalization, deterministic lowest-column/lowest-row pivoting.
inline int rational_rank(const Matrix<Rational>& m) {
  using Row = std::map<size_t, Integer>;
  std::vector<Row> rows;
  rows.reserve(m.rows());
  for (size_t i = 0; i < m.rows(); ++i) {
    Integer lcm(1);
    for (size_t j = 0; j < m.cols(); ++j) {
      const Rational& v = m.at(i, j);
      if (v != 0) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(v));
    }
    Row row;
    for (size_t j = 0; j < m.cols(); ++j) {
      const Rational& v = m.at(i, j);
      if (v == 0) continue;
      row[j] = boost::multiprecision::numerator(v) *
               (lcm / boost::multiprecision::denominator(v));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  int rank = 0;
  while (!rows.empty()) {
    size_t pivot_col = SIZE_MAX;
    for (const Row& r : rows) pivot_col = std::min(pivot_col, r.begin()->first);
    size_t pivot_row = SIZE_MAX;
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i].begin()->first == pivot_col) {
        pivot_row = i;
        break;
      }
    Row pivot = std::move(rows[pivot_row]);
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pivot_row));
    const Integer pv = pivot.at(pivot_col);
    std::vector<Row> next;
    next.reserve(rows.size());
    for (Row& r : rows) {
      auto it = r.find(pivot_col);
      if (it == r.end()) {
        next.push_back(std::move(r));
        continue;
      }
      const Integer rv = it->second;
      Row updated;
      auto pi = pivot.begin();
      auto ri = r.begin();
      while (pi != pivot.end() || ri != r.end()) {
        if (ri == r.end() || (pi != pivot.end() && pi->first < ri->first)) {
          updated[pi->first] = -rv * pi->second;
          ++pi;
        } else if (pi == pivot.end() || ri->first < pi->first) {
          updated[ri->first] = pv * ri->second;
          ++ri;
        } else {
          const Integer v = pv * ri->second - rv * pi->second;
          if (v != 0) updated[ri->first] = v;
          ++pi;
          ++ri;
        }
      }
      updated.erase(pivot_col);
      if (!updated.empty()) {
        Integer g(0);
        for (const auto& [c, v] : updated) g = boost::multiprecision::gcd(g, v);
        if (g > 1)
          for (auto& [c, v] : updated) v /= g;
        next.push_back(std::move(updated));
      }
    }
    rows = std::move(next);
    ++rank;
  }
  return rank;
}

}  // namespace liejets
