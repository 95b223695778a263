#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "liejets/groupoid.hpp"

// Chain-level calculus on top of the enveloping algebra and the jet bundle:
//
//   * the differential-operator cochain complex (tensor powers of the
//     enveloping algebra) with its differential dH and the cup product,
//   * the jet chain complex in reduced and unreduced form with cap products,
//   * the bar resolution of the base ring over the jet algebra, with its
//     contracting homotopy,
//   * a Koszul resolution of the base ring over the jet algebra in exhibited
//     local coordinates, together with its dual complex,
//   * the comparison maps between the two worlds: the evaluation pairing
//     matrix on tensor windows (phi_component) and the slot-zero counit
//     collapse (psi_map, reduce_chain).
//
// CONVENTION TABLE -- every sign below is fixed here once and exercised by
// the identity tests (squared differentials, Leibniz rules, homotopy law):
//
//   cochain differential, degree-p tensor D = D_1 x ... x D_p:
//       dH(D) = D x 1 - Delta_p(D) + Delta_{p-1}(D) - ...
//               + (-1)^{p+1} 1 x D
//     (appended unit +, coproduct at slot i carries (-1)^{p+1-i}, prepended
//     unit carries (-1)^{p+1}; degree 0 maps to zero).
//
//   cup product:
//       (D_1 x..x D_p) cup (E_1 x..x E_q)
//         = (-1)^{pq} D_1 x..x D_p x E_1 x..x E_q,
//     concatenation over the base ring; a degree-0 factor multiplies through
//     (from the left as a coefficient, from the right into the last slot).
//
//   unreduced chain differential on a_0 x ... x a_p: interior merges (i,i+1)
//     with sign (-1)^i for i = 0..p-1, plus the wrap-around merge
//     (-1)^p (a_p a_0) x a_1 x..x a_{p-1}.  Degree 0 maps to zero.
//
//   reduced chain differential on a_1 x ... x a_p: counit head
//     +eps(a_1) a_2 x.., interior merges (i,i+1) with sign (-1)^i, counit
//     tail (-1)^p eps(a_p) a_1 x..x a_{p-1}.  Degrees 0 and 1 map to zero
//     (head and tail cancel).
//
//   bar differential on a_0 x ... x a_p: interior merges (i,i+1) with sign
//     (-1)^i, plus the counit tail (-1)^p eps(a_p) a_0 x..x a_{p-1}; a
//     degree-0 element maps to its augmentation eps(a_0).  The contracting
//     homotopy prepends the unit jet (a scalar f becomes f*xi_0), and
//     b'h + hb' = id holds degreewise on the augmented complex.
//
//   cap products: reduced form
//       D cap (a_1 x..x a_q) = a_1(D_1)...a_p(D_p) a_{p+1} x..x a_q
//     with plain jet evaluations (no order loss, scalars multiply through);
//     unreduced/bar form
//       D cap (a_0 x..x a_q)
//         = a_0 * nabla2_{D_1}(a_1) * ... * nabla2_{D_p}(a_p) x a_{p+1} x..
//     merged into slot 0; the output order drops by the largest total degree
//     of the cochain's cells.
//
//   Koszul complex: exterior generators xhat_1..xhat_d, one homological
//     degree each, with differential xhat_i |-> x_i extended as an odd
//     derivation: removing the j-th entry of a strictly decreasing index
//     list carries (-1)^{j-1}.

namespace liejets {

// ---------------------------------------------------------------------------
// Graded complexes with exact polynomial matrices.
// ---------------------------------------------------------------------------

// A bounded complex of free R-modules.  Piece n has rank ranks[n]; the
// differential out of piece n is a (ranks[n + direction] x ranks[n]) matrix
// acting on coordinate columns, with direction -1 for chain complexes and +1
// for cochain complexes.  Construction validates shapes and checks that
// consecutive differentials compose to zero, entry by entry.
struct GradedComplex {
  std::string name;
  int direction = -1;
  std::map<int, std::size_t> ranks;
  std::map<int, Matrix<Polynomial>> differentials;
  std::map<int, std::vector<std::string>> labels;  // optional, for reports
};

inline bool matrix_is_zero(const Matrix<Polynomial>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) return false;
  return true;
}

inline GradedComplex make_graded_complex(
    std::string name, int direction, std::map<int, std::size_t> ranks,
    std::map<int, Matrix<Polynomial>> differentials) {
  if (direction != 1 && direction != -1)
    throw SpecError("graded complex: direction must be +1 or -1");
  GradedComplex g;
  g.name = std::move(name);
  g.direction = direction;
  g.ranks = std::move(ranks);
  g.differentials = std::move(differentials);
  for (const auto& [n, mat] : g.differentials) {
    auto src = g.ranks.find(n);
    const std::size_t source = src == g.ranks.end() ? 0 : src->second;
    auto tgt = g.ranks.find(n + g.direction);
    const std::size_t target = tgt == g.ranks.end() ? 0 : tgt->second;
    if (mat.cols() != source || mat.rows() != target)
      throw SpecError("graded complex '" + g.name +
                      "': differential shape mismatch at degree " +
                      std::to_string(n));
  }
  for (const auto& [n, mat] : g.differentials) {
    auto next = g.differentials.find(n + g.direction);
    if (next == g.differentials.end()) continue;
    const Matrix<Polynomial>& a = next->second;
    // Column-sparse composition: assembled differentials are sparse, so
    // walk only the nonzero entries of each column.
    for (std::size_t j = 0; j < mat.cols(); ++j) {
      std::map<std::size_t, Polynomial> acc;
      for (std::size_t k = 0; k < mat.rows(); ++k) {
        const Polynomial& mkj = mat.at(k, j);
        if (mkj.is_zero()) continue;
        for (std::size_t i = 0; i < a.rows(); ++i) {
          const Polynomial& aik = a.at(i, k);
          if (aik.is_zero()) continue;
          auto it = acc.find(i);
          if (it == acc.end())
            acc.emplace(i, aik * mkj);
          else
            it->second += aik * mkj;
        }
      }
      for (const auto& [i, v] : acc)
        if (!v.is_zero())
          throw SpecError(
              "graded complex '" + g.name +
              "': differential does not square to zero at degree " +
              std::to_string(n));
    }
  }
  return g;
}

// Exact evaluation of a coefficient polynomial at a rational point.
inline Rational poly_eval_at(const Polynomial& f,
                             const std::vector<Rational>& point) {
  if (static_cast<int>(point.size()) != f.nvars())
    throw SpecError("point dimension does not match the variable count");
  Rational out(0);
  for (const auto& [a, c] : f.terms()) {
    Rational v = c;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (int k = 0; k < a[i]; ++k) v = v * point[i];
    out = out + v;
  }
  return out;
}

// Serialization contract: a list of {homological_degree, rank,
// differential_matrix} with the matrix in row-major order and every entry an
// exact rational rendered as a string, obtained by evaluating the polynomial
// entries at the given base point.
inline nlohmann::json graded_complex_to_json(
    const GradedComplex& g, const std::vector<Rational>& point) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& [n, rank] : g.ranks) {
    nlohmann::json e;
    e["homological_degree"] = n;
    e["rank"] = rank;
    nlohmann::json mat = nlohmann::json::array();
    auto it = g.differentials.find(n);
    if (it != g.differentials.end()) {
      for (std::size_t i = 0; i < it->second.rows(); ++i)
        for (std::size_t j = 0; j < it->second.cols(); ++j)
          mat.push_back(
              rational_to_string(poly_eval_at(it->second.at(i, j), point)));
    }
    e["differential_matrix"] = mat;
    pieces.push_back(e);
  }
  nlohmann::json j;
  j["schema"] = "liejets-complex/1";
  j["name"] = g.name;
  j["direction"] = g.direction;
  j["pieces"] = pieces;
  return j;
}

// All arity-sized tuples of indices of degree <= maxdeg, in the canonical
// tuple order (slotwise graded order).
inline std::vector<IndexTuple> index_tuples(int d, int maxdeg, int arity) {
  std::vector<IndexTuple> out;
  const std::vector<MultiIndex> single = indices_up_to(d, maxdeg);
  out.push_back(IndexTuple{});
  for (int s = 0; s < arity; ++s) {
    std::vector<IndexTuple> next;
    next.reserve(out.size() * single.size());
    for (const auto& t : out)
      for (const auto& a : single) {
        IndexTuple u = t;
        u.push_back(a);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), TupleLess{});
  return out;
}

// ---------------------------------------------------------------------------
// Cochains: tensor powers of the enveloping algebra.
// ---------------------------------------------------------------------------

// A homogeneous element of the differential-operator complex: a degree
// (arity) p together with a p-fold tensor over the base ring in slot-zero
// normal form.  Degree zero is a bare coefficient, stored as the arity-0
// tensor whose single cell is the empty tuple.
struct Cochain {
  int arity = 0;
  UTensor tensor;

  bool is_zero() const { return tensor.is_zero(); }
  // Degree-0 payload.
  Polynomial scalar() const { return tensor.coeff(IndexTuple{}); }

  friend bool operator==(const Cochain& a, const Cochain& b) {
    return a.arity == b.arity && a.tensor == b.tensor;
  }
  friend bool operator!=(const Cochain& a, const Cochain& b) {
    return !(a == b);
  }
};

inline Cochain cochain_zero(const AlgebroidSpec& spec, int arity) {
  if (arity < 0) throw SpecError("cochain arity must be nonnegative");
  return Cochain{arity, UTensor(spec.d, spec.m, arity)};
}

inline Cochain cochain_scalar(const AlgebroidSpec& spec, const Polynomial& f) {
  Cochain c = cochain_zero(spec, 0);
  c.tensor.add_term(IndexTuple{}, f);
  return c;
}

inline Cochain cochain_from_tensor(const AlgebroidSpec& spec,
                                   const UTensor& t) {
  if (t.d() != spec.d || t.m() != spec.m)
    throw SpecError("cochain tensor does not match the spec");
  return Cochain{t.arity(), t};
}

inline Cochain cochain_from_u(const AlgebroidSpec& spec, const UElement& u) {
  UTensor t(spec.d, spec.m, 1);
  for (const auto& [a, f] : u.terms()) t.add_term({a}, f);
  return Cochain{1, t};
}

inline Cochain operator+(const Cochain& a, const Cochain& b) {
  if (a.arity != b.arity) throw SpecError("cochain sum: arity mismatch");
  Cochain r = a;
  r.tensor += b.tensor;
  return r;
}

inline Cochain operator-(const Cochain& a, const Cochain& b) {
  if (a.arity != b.arity)
    throw SpecError("cochain difference: arity mismatch");
  Cochain r = a;
  r.tensor -= b.tensor;
  return r;
}

inline Cochain operator*(const Polynomial& f, const Cochain& a) {
  return Cochain{a.arity, f * a.tensor};
}

inline Cochain operator*(const Rational& c, const Cochain& a) {
  return Cochain{a.arity, c * a.tensor};
}

// Concatenation of slot-zero normal tensors over the base ring: each
// coefficient of the right factor travels through the left factor by
// right-multiplying its last slot (the relation defining the tensor product
// over the ring), then the right factor's slots are appended verbatim.
inline UTensor tensor_concat(const AlgebroidSpec& spec, const UTensor& a,
                             const UTensor& b) {
  UTensor out(spec.d, spec.m, a.arity() + b.arity());
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [bk, bf] : b.terms()) {
    UTensor cur(spec.d, spec.m, 0);
    if (a.arity() == 0) {
      cur.add_term(IndexTuple{}, a.coeff(IndexTuple{}) * bf);
    } else {
      cur = tensor_push_right(spec, a, bf);
    }
    for (const auto& z : bk) cur = tensor_append(spec, cur, u_mono(spec, z));
    out += cur;
  }
  return out;
}

inline std::string u_tensor_to_string(const AlgebroidSpec& spec,
                                      const UTensor& t) {
  if (t.is_zero()) return "0";
  std::string out;
  for (const auto& [key, f] : t.terms()) {
    std::string slots;
    for (std::size_t s = 0; s < key.size(); ++s) {
      if (s) slots += " x ";
      std::string idx;
      for (std::size_t i = 0; i < key[s].size(); ++i) {
        if (i) idx += ",";
        idx += std::to_string(key[s][i]);
      }
      slots += "e(" + idx + ")";
    }
    if (!out.empty()) out += " + ";
    out += "(" + f.to_string(spec.var_names) + ")*[" + slots + "]";
  }
  return out;
}

// Differential on the cochain complex; see the convention table.
inline Cochain dH(const AlgebroidSpec& spec, const Cochain& c) {
  const int p = c.arity;
  Cochain out = cochain_zero(spec, p + 1);
  if (p == 0) return out;
  const Rational one(1);
  const Rational minus(-1);
  for (const auto& [key, f] : c.tensor.terms()) {
    {  // D x 1, sign +1
      IndexTuple t = key;
      t.push_back(MultiIndex(static_cast<std::size_t>(spec.d), 0));
      out.tensor.add_term(t, f);
    }
    {  // 1 x D, sign (-1)^{p+1}; the new unit slot absorbs no coefficient.
      IndexTuple t;
      t.reserve(key.size() + 1);
      t.push_back(MultiIndex(static_cast<std::size_t>(spec.d), 0));
      for (const auto& a : key) t.push_back(a);
      out.tensor.add_term(t, (p + 1) % 2 == 0 ? f : -f);
    }
    for (int i = 1; i <= p; ++i) {  // coproduct at slot i, sign (-1)^{p+1-i}
      const Rational sign = ((p + 1 - i) % 2 == 0) ? one : minus;
      UTensor left(spec.d, spec.m, i - 1);
      left.add_term(IndexTuple(key.begin(), key.begin() + (i - 1)), f);
      const UTensor mid =
          detail::coproduct_mono(spec, key[static_cast<std::size_t>(i - 1)]);
      UTensor right(spec.d, spec.m, p - i);
      right.add_term(IndexTuple(key.begin() + i, key.end()),
                     Polynomial::constant(spec.m, 1));
      const UTensor spliced =
          tensor_concat(spec, tensor_concat(spec, left, mid), right);
      out.tensor += sign * spliced;
    }
  }
  return out;
}

// Cup product; see the convention table.
inline Cochain cup(const AlgebroidSpec& spec, const Cochain& a,
                   const Cochain& b) {
  UTensor t = tensor_concat(spec, a.tensor, b.tensor);
  const bool flip = (a.arity % 2 == 1) && (b.arity % 2 == 1);
  return Cochain{a.arity + b.arity, flip ? Rational(-1) * t : t};
}

// ---------------------------------------------------------------------------
// Jet tensors: tensor powers of the jet algebra over the base ring.
// ---------------------------------------------------------------------------

// A tensor of jets over R in the dual-basis expansion: cells map a tuple
// (a_1,..,a_arity) of dual-basis indices, each of degree < order, to a
// coefficient in R.  Coefficients move freely between slots, so a cell is
// determined by its index tuple alone.
struct JetTensor {
  int d = 0;
  int m = 0;
  int arity = 0;
  int order = 0;
  CellMap cells;

  bool is_zero() const { return cells.empty(); }

  friend bool operator==(const JetTensor& a, const JetTensor& b) {
    return a.d == b.d && a.m == b.m && a.arity == b.arity &&
           a.order == b.order && a.cells == b.cells;
  }
  friend bool operator!=(const JetTensor& a, const JetTensor& b) {
    return !(a == b);
  }
};

inline JetTensor jt_zero(const AlgebroidSpec& spec, int arity, int order) {
  if (arity < 0) throw SpecError("jet tensor arity must be nonnegative");
  if (order < 1) throw OrderError("jet tensor order must be at least 1");
  JetTensor t;
  t.d = spec.d;
  t.m = spec.m;
  t.arity = arity;
  t.order = order;
  return t;
}

inline void jt_add_cell(JetTensor& t, const IndexTuple& key,
                        const Polynomial& f) {
  if (static_cast<int>(key.size()) != t.arity)
    throw SpecError("jet tensor cell arity mismatch");
  for (const auto& a : key) {
    if (static_cast<int>(a.size()) != t.d)
      throw SpecError("jet tensor cell index width mismatch");
    if (degree(a) >= t.order)
      throw OrderError("jet tensor cell exceeds the certified order");
  }
  add_cell(t.cells, key, f);
}

inline JetTensor operator+(const JetTensor& a, const JetTensor& b) {
  if (a.d != b.d || a.m != b.m || a.arity != b.arity || a.order != b.order)
    throw SpecError("jet tensor sum: shape mismatch");
  JetTensor r = a;
  for (const auto& [k, f] : b.cells) add_cell(r.cells, k, f);
  return r;
}

inline JetTensor operator-(const JetTensor& a, const JetTensor& b) {
  if (a.d != b.d || a.m != b.m || a.arity != b.arity || a.order != b.order)
    throw SpecError("jet tensor difference: shape mismatch");
  JetTensor r = a;
  for (const auto& [k, f] : b.cells) add_cell(r.cells, k, -f);
  return r;
}

inline JetTensor operator*(const Polynomial& f, const JetTensor& a) {
  JetTensor r = a;
  r.cells.clear();
  if (f.is_zero()) return r;
  for (const auto& [k, g] : a.cells) {
    const Polynomial p = f * g;
    if (!p.is_zero()) r.cells.emplace(k, p);
  }
  return r;
}

inline JetTensor operator*(const Rational& c, const JetTensor& a) {
  JetTensor r = a;
  r.cells.clear();
  if (c == 0) return r;
  for (const auto& [k, g] : a.cells) r.cells.emplace(k, c * g);
  return r;
}

// Truncation: drop every cell with a slot at or above the new order.
inline JetTensor jt_truncated(const JetTensor& t, int new_order) {
  if (new_order < 1 || new_order > t.order)
    throw OrderError("jet tensor truncation order out of range");
  JetTensor r = t;
  r.order = new_order;
  r.cells.clear();
  for (const auto& [k, f] : t.cells) {
    bool keep = true;
    for (const auto& a : k)
      if (degree(a) >= new_order) {
        keep = false;
        break;
      }
    if (keep) r.cells.emplace(k, f);
  }
  return r;
}

inline bool jt_equal_at_order(const JetTensor& a, const JetTensor& b,
                              int order) {
  if (a.d != b.d || a.m != b.m || a.arity != b.arity) return false;
  if (order > a.order || order > b.order)
    throw OrderError("comparison order exceeds a certified order");
  return jt_truncated(a, order).cells == jt_truncated(b, order).cells;
}

// Plain tensor of jets: the cells are all products of per-slot coefficients.
// All factors must carry the same certified order.
inline JetTensor jt_from_jets(const AlgebroidSpec& spec,
                              const std::vector<Jet>& slots, int order) {
  JetTensor t = jt_zero(spec, static_cast<int>(slots.size()), order);
  for (const auto& s : slots)
    if (s.order() != order)
      throw OrderError("jet tensor factors must share the certified order");
  std::vector<std::pair<IndexTuple, Polynomial>> acc;
  acc.emplace_back(IndexTuple{}, Polynomial::constant(spec.m, 1));
  for (const auto& s : slots) {
    std::vector<std::pair<IndexTuple, Polynomial>> next;
    for (const auto& [key, f] : acc)
      for (const auto& [a, g] : s.coeffs()) {
        IndexTuple k = key;
        k.push_back(a);
        next.emplace_back(std::move(k), f * g);
      }
    acc = std::move(next);
  }
  for (const auto& [k, f] : acc) jt_add_cell(t, k, f);
  return t;
}

inline std::string jt_to_string(const AlgebroidSpec& spec,
                                const JetTensor& t) {
  return cells_to_string(spec, t.cells);
}

// The three tensor shapes of the chain-level theory.  The unreduced chain
// and the bar element both carry a structurally distinguished slot 0 (the
// module slot); the reduced chain does not.
struct ChainReduced {
  JetTensor t;  // arity = homological degree
  int degree() const { return t.arity; }
};

struct ChainUnreduced {
  JetTensor t;  // arity = homological degree + 1; slot 0 is the module slot
  int degree() const { return t.arity - 1; }
};

struct BarElement {
  JetTensor t;  // arity = homological degree + 1; slot 0 carries the action
  int degree() const { return t.arity - 1; }
};

namespace detail {

// Memoized product of two dual-basis jets at a fixed order.
struct BasisMulCache {
  std::mutex mu;
  std::map<std::tuple<std::string, int, MultiIndex, MultiIndex>,
           std::shared_ptr<const Jet>>
      mul;
};

inline BasisMulCache& basis_mul_cache() {
  static BasisMulCache c;
  return c;
}

inline Jet basis_jet_mul(const AlgebroidSpec& spec, const MultiIndex& a,
                         const MultiIndex& b, int order) {
  auto& cache = basis_mul_cache();
  const auto key = std::make_tuple(spec.fingerprint(), order, a, b);
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.mul.find(key);
    if (it != cache.mul.end()) return *it->second;
  }
  Jet r = jet_mul(spec, jet_basis(spec, a, order), jet_basis(spec, b, order));
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.mul.emplace(key, std::make_shared<const Jet>(r));
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Chain differentials.
// ---------------------------------------------------------------------------

inline ChainReduced bH_reduced(const AlgebroidSpec& spec,
                               const ChainReduced& c) {
  const int p = c.t.arity;
  ChainReduced out{jt_zero(spec, std::max(p - 1, 0), c.t.order)};
  if (p <= 1) return out;  // head and tail cancel in degree 1
  for (const auto& [key, f] : c.t.cells) {
    if (is_zero_index(key.front())) {  // counit head, sign +1
      jt_add_cell(out.t, IndexTuple(key.begin() + 1, key.end()), f);
    }
    // Interior merge of stored slots (i, i+1); these are the display's
    // slots (i+1, i+2), so the sign is (-1)^{i+1}.
    for (int i = 0; i + 1 < p; ++i) {
      const Jet prod = detail::basis_jet_mul(
          spec, key[static_cast<std::size_t>(i)],
          key[static_cast<std::size_t>(i + 1)], c.t.order);
      const Polynomial signed_f = (i % 2 == 0) ? -f : f;
      for (const auto& [z, g] : prod.coeffs()) {
        IndexTuple k;
        k.reserve(key.size() - 1);
        k.insert(k.end(), key.begin(), key.begin() + i);
        k.push_back(z);
        k.insert(k.end(), key.begin() + i + 2, key.end());
        jt_add_cell(out.t, k, signed_f * g);
      }
    }
    if (is_zero_index(key.back())) {  // counit tail, sign (-1)^p
      jt_add_cell(out.t, IndexTuple(key.begin(), key.end() - 1),
                  (p % 2 == 0) ? f : -f);
    }
  }
  return out;
}

inline ChainUnreduced bH_unreduced(const AlgebroidSpec& spec,
                                   const ChainUnreduced& c) {
  const int slots = c.t.arity;
  if (slots < 1) throw SpecError("unreduced chain needs a module slot");
  const int p = slots - 1;
  ChainUnreduced out{jt_zero(spec, std::max(slots - 1, 1), c.t.order)};
  if (p == 0) return out;
  for (const auto& [key, f] : c.t.cells) {
    for (int i = 0; i + 1 < slots; ++i) {  // merge (i, i+1), sign (-1)^i
      const Jet prod = detail::basis_jet_mul(
          spec, key[static_cast<std::size_t>(i)],
          key[static_cast<std::size_t>(i + 1)], c.t.order);
      const Polynomial signed_f = (i % 2 == 0) ? f : -f;
      for (const auto& [z, g] : prod.coeffs()) {
        IndexTuple k;
        k.reserve(key.size() - 1);
        k.insert(k.end(), key.begin(), key.begin() + i);
        k.push_back(z);
        k.insert(k.end(), key.begin() + i + 2, key.end());
        jt_add_cell(out.t, k, signed_f * g);
      }
    }
    {  // wrap-around merge of the last slot into slot 0, sign (-1)^p
      const Jet prod =
          detail::basis_jet_mul(spec, key.back(), key.front(), c.t.order);
      const Polynomial signed_f = (p % 2 == 0) ? f : -f;
      for (const auto& [z, g] : prod.coeffs()) {
        IndexTuple k;
        k.reserve(key.size() - 1);
        k.push_back(z);
        k.insert(k.end(), key.begin() + 1, key.end() - 1);
        jt_add_cell(out.t, k, signed_f * g);
      }
    }
  }
  return out;
}

inline BarElement bar_diff(const AlgebroidSpec& spec, const BarElement& b) {
  const int slots = b.t.arity;
  if (slots < 1)
    throw SpecError("bar differential needs at least the module slot");
  const int p = slots - 1;
  BarElement out{jt_zero(spec, slots - 1, b.t.order)};
  for (const auto& [key, f] : b.t.cells) {
    for (int i = 0; i + 1 < slots; ++i) {  // merge (i, i+1), sign (-1)^i
      const Jet prod = detail::basis_jet_mul(
          spec, key[static_cast<std::size_t>(i)],
          key[static_cast<std::size_t>(i + 1)], b.t.order);
      const Polynomial signed_f = (i % 2 == 0) ? f : -f;
      for (const auto& [z, g] : prod.coeffs()) {
        IndexTuple k;
        k.reserve(key.size() - 1);
        k.insert(k.end(), key.begin(), key.begin() + i);
        k.push_back(z);
        k.insert(k.end(), key.begin() + i + 2, key.end());
        jt_add_cell(out.t, k, signed_f * g);
      }
    }
    if (is_zero_index(key.back())) {  // counit tail, sign (-1)^p
      // For a degree-0 element this IS the augmentation: the empty tuple
      // cell holds eps(a_0).
      jt_add_cell(out.t, IndexTuple(key.begin(), key.end() - 1),
                  (p % 2 == 0) ? f : -f);
    }
  }
  return out;
}

// Contracting homotopy: prepend the unit jet.  Applied to a degree-(-1)
// element (an arity-0 tensor holding a scalar f) this produces f * xi_0.
inline BarElement bar_homotopy(const AlgebroidSpec& spec, const BarElement& b) {
  BarElement out{jt_zero(spec, b.t.arity + 1, b.t.order)};
  const MultiIndex zero(static_cast<std::size_t>(spec.d), 0);
  for (const auto& [key, f] : b.t.cells) {
    IndexTuple k;
    k.reserve(key.size() + 1);
    k.push_back(zero);
    k.insert(k.end(), key.begin(), key.end());
    jt_add_cell(out.t, k, f);
  }
  return out;
}

inline BarElement bar_scalar(const AlgebroidSpec& spec, const Polynomial& f,
                             int order) {
  BarElement out{jt_zero(spec, 0, order)};
  if (!f.is_zero()) jt_add_cell(out.t, IndexTuple{}, f);
  return out;
}

// Slot-zero counit collapse; the reduction commutes with the differentials.
inline ChainReduced reduce_chain(const ChainUnreduced& c) {
  ChainReduced out;
  out.t = c.t;
  out.t.arity = c.t.arity - 1;
  out.t.cells.clear();
  if (c.t.arity < 1) throw SpecError("unreduced chain needs a module slot");
  for (const auto& [key, f] : c.t.cells)
    if (is_zero_index(key.front()))
      add_cell(out.t.cells, IndexTuple(key.begin() + 1, key.end()), f);
  return out;
}

// Collapse of a coefficient against a bar element: f x (a_0 x .. x a_p)
// maps to f * eps(a_0) * (a_1 x .. x a_p).
inline ChainReduced psi_map(const AlgebroidSpec& spec, const Polynomial& f,
                            const BarElement& b) {
  (void)spec;
  ChainReduced r = reduce_chain(ChainUnreduced{b.t});
  r.t = f * r.t;
  return r;
}

// ---------------------------------------------------------------------------
// Cap products.
// ---------------------------------------------------------------------------

// Largest total degree over the cells of a cochain (0 for the zero cochain).
inline int cochain_filtration(const Cochain& c) {
  int best = 0;
  for (const auto& [key, f] : c.tensor.terms()) {
    int tot = 0;
    for (const auto& a : key) tot += degree(a);
    best = std::max(best, tot);
  }
  return best;
}

// Reduced cap: plain evaluations, no order loss.
inline ChainReduced cap_reduced(const AlgebroidSpec& spec, const Cochain& D,
                                const ChainReduced& c) {
  const int p = D.arity;
  const int q = c.t.arity;
  if (p > q)
    throw SpecError("cap: cochain arity exceeds the chain arity");
  ChainReduced out{jt_zero(spec, q - p, c.t.order)};
  for (const auto& [dk, g] : D.tensor.terms()) {
    for (const auto& a : dk)
      if (degree(a) >= c.t.order)
        throw OrderError("cap: cochain slot degree reaches the jet order");
    for (const auto& [ck, f] : c.t.cells) {
      Polynomial val = g * f;
      for (int i = 0; i < p && !val.is_zero(); ++i)
        val = val * jet_eval(spec,
                             jet_basis(spec, ck[static_cast<std::size_t>(i)],
                                       c.t.order),
                             u_mono(spec, dk[static_cast<std::size_t>(i)]));
      if (val.is_zero()) continue;
      jt_add_cell(out.t, IndexTuple(ck.begin() + p, ck.end()), val);
    }
  }
  return out;
}

namespace detail {

// Shared core of the module-slot cap: merge the evaluated slots into slot 0.
inline JetTensor cap_module_core(const AlgebroidSpec& spec, const Cochain& D,
                                 const JetTensor& t) {
  const int p = D.arity;
  const int slots = t.arity;
  if (slots < 1) throw SpecError("cap: the chain needs a module slot");
  if (p > slots - 1)
    throw SpecError("cap: cochain arity exceeds the chain degree");
  const int drop = cochain_filtration(D);
  const int out_order = t.order - drop;
  if (out_order < 1)
    throw OrderError("cap: certified order exhausted by the cochain degree");
  JetTensor out = jt_zero(spec, slots - p, out_order);
  for (const auto& [dk, g] : D.tensor.terms()) {
    int cell_drop = 0;
    for (const auto& a : dk) cell_drop += degree(a);
    const int cell_order = t.order - cell_drop;
    for (const auto& [ck, f] : t.cells) {
      // slot 0 times the second-structure images of slots 1..p, all taken
      // at the cell's exact order, then truncated to the uniform output
      // order.
      Jet merged = jet_basis(spec, ck.front(), t.order).truncated(cell_order);
      for (int i = 1; i <= p; ++i) {
        const UElement arg =
            (i == 1) ? u_monomial(spec, dk[0], g)
                     : u_mono(spec, dk[static_cast<std::size_t>(i - 1)]);
        const Jet factor = nabla2(
            spec, arg, jet_basis(spec, ck[static_cast<std::size_t>(i)],
                                 t.order));
        merged = jet_mul(spec, merged, jet_common(factor, cell_order));
        if (merged.is_zero()) break;
      }
      if (p == 0) merged = g * merged;
      const Jet final_slot = jet_common(merged, out_order);
      if (final_slot.is_zero()) continue;
      bool keep = true;
      for (int j = p + 1; j < slots && keep; ++j)
        if (degree(ck[static_cast<std::size_t>(j)]) >= out_order) keep = false;
      if (!keep) continue;  // beyond the certified window of the output
      for (const auto& [z, h] : final_slot.coeffs()) {
        IndexTuple k;
        k.reserve(static_cast<std::size_t>(slots - p));
        k.push_back(z);
        k.insert(k.end(), ck.begin() + p + 1, ck.end());
        jt_add_cell(out, k, f * h);
      }
    }
  }
  return out;
}

}  // namespace detail

inline ChainUnreduced cap_unreduced(const AlgebroidSpec& spec,
                                    const Cochain& D,
                                    const ChainUnreduced& c) {
  return ChainUnreduced{detail::cap_module_core(spec, D, c.t)};
}

inline BarElement cap_bar(const AlgebroidSpec& spec, const Cochain& D,
                          const BarElement& b) {
  return BarElement{detail::cap_module_core(spec, D, b.t)};
}

// Slot-wise Leibniz action of the flat connection attached to a frame
// combination l; the certified order drops by one.  The connection
// differentiates coefficients through the anchor, so each cell lets its
// coefficient ride on slot 0 (any slot gives the same total, because every
// slot carries the same connection).  Contributions whose untouched slots
// fall outside the reduced window are dropped, as in any truncation.
inline JetTensor gnabla_tensor(const AlgebroidSpec& spec, const UElement& l,
                               const JetTensor& t) {
  for (const auto& [a, f] : l.terms())
    if (degree(a) != 1)
      throw SpecError("slot-wise flat action needs a frame combination");
  if (t.order < 2)
    throw OrderError("order exhausted by the slot-wise flat action");
  JetTensor out = jt_zero(spec, t.arity, t.order - 1);
  for (const auto& [key, f] : t.cells) {
    if (t.arity == 0) {
      // Pure coefficient: the action is the anchor derivation.
      const Jet moved = nabla1(spec, l, unit_1(spec, f, t.order));
      const Polynomial df = moved.coeff(MultiIndex(
          static_cast<std::size_t>(spec.d), 0));
      jt_add_cell(out, key, df);
      continue;
    }
    for (int s = 0; s < t.arity; ++s) {
      bool ok = true;
      for (int j = 0; j < t.arity && ok; ++j)
        if (j != s && degree(key[static_cast<std::size_t>(j)]) >= t.order - 1)
          ok = false;
      if (!ok) continue;
      Jet slot_jet =
          jet_basis(spec, key[static_cast<std::size_t>(s)], t.order);
      if (s == 0) slot_jet = f * slot_jet;
      const Jet moved = nabla1(spec, l, slot_jet);
      for (const auto& [z, g] : moved.coeffs()) {
        IndexTuple k = key;
        k[static_cast<std::size_t>(s)] = z;
        jt_add_cell(out, k, s == 0 ? g : f * g);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The evaluation-pairing matrix between tensor windows.
// ---------------------------------------------------------------------------

// Matrix of the map sending a degree-p tensor of operators to the functional
// (a_1 x .. x a_p) |-> prod_i a_i(D_i) on the window of jet tensors with all
// slot degrees < q.  Rows are indexed by the jet-side tuples, columns by the
// operator-side tuples, both in canonical tuple order; the entry is computed
// by honest jet evaluation.
inline Matrix<Polynomial> phi_component(const AlgebroidSpec& spec, int q,
                                        int p) {
  if (q < 1) throw OrderError("phi window needs order at least 1");
  if (p < 0) throw SpecError("phi arity must be nonnegative");
  const std::vector<IndexTuple> tuples = index_tuples(spec.d, q - 1, p);
  const std::size_t n = tuples.size();
  Matrix<Polynomial> out(n, n, Polynomial(spec.m));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Polynomial v = Polynomial::constant(spec.m, 1);
      for (int i = 0; i < p && !v.is_zero(); ++i)
        v = v *
            jet_eval(spec,
                     jet_basis(spec, tuples[r][static_cast<std::size_t>(i)],
                               q),
                     u_mono(spec, tuples[c][static_cast<std::size_t>(i)]));
      out.at(r, c) = v;
    }
  return out;
}

// ---------------------------------------------------------------------------
// The Koszul resolution in exhibited local coordinates.
// ---------------------------------------------------------------------------

// An element of the Koszul complex: a coefficient in the truncated
// polynomial module R[x_1..x_d] (x-degree <= bound) times an exterior
// monomial in the odd generators, stored as a strictly decreasing index
// list.
struct KoszulElement {
  int d = 0;
  int m = 0;
  int bound = 0;  // kept x-degrees are <= bound
  // (x-exponent, strictly decreasing generator list) -> coefficient in R
  std::map<std::pair<MultiIndex, std::vector<int>>, Polynomial> terms;

  friend bool operator==(const KoszulElement& a, const KoszulElement& b) {
    return a.d == b.d && a.m == b.m && a.bound == b.bound &&
           a.terms == b.terms;
  }
  friend bool operator!=(const KoszulElement& a, const KoszulElement& b) {
    return !(a == b);
  }
};

inline KoszulElement koszul_zero(const AlgebroidSpec& spec, int bound) {
  if (bound < 0) throw SpecError("koszul bound must be nonnegative");
  KoszulElement e;
  e.d = spec.d;
  e.m = spec.m;
  e.bound = bound;
  return e;
}

inline void koszul_add_term(KoszulElement& e, const MultiIndex& u,
                            const std::vector<int>& gens,
                            const Polynomial& f) {
  if (static_cast<int>(u.size()) != e.d)
    throw SpecError("koszul x-exponent width mismatch");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i] < 0 || gens[i] >= e.d)
      throw SpecError("koszul generator index out of range");
    if (i + 1 < gens.size() && gens[i] <= gens[i + 1])
      throw SpecError("koszul generator list must be strictly decreasing");
  }
  if (degree(u) > e.bound) return;  // zero in the truncated module
  if (f.is_zero()) return;
  const auto key = std::make_pair(u, gens);
  auto it = e.terms.find(key);
  if (it == e.terms.end()) {
    e.terms.emplace(key, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) e.terms.erase(it);
}

// Odd-derivation differential: each exterior generator maps to its
// coordinate, with the sign (-1)^{j-1} for the j-th entry of the stored
// strictly decreasing list.  Terms pushed past the x-degree bound vanish in
// the truncated module.
inline KoszulElement koszul_diff(const AlgebroidSpec& spec,
                                 const KoszulElement& e) {
  KoszulElement out = koszul_zero(spec, e.bound);
  for (const auto& [key, f] : e.terms) {
    const auto& [u, gens] = key;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      MultiIndex xu = u;
      xu[static_cast<std::size_t>(gens[j])] += 1;
      std::vector<int> rest;
      rest.reserve(gens.size() - 1);
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (i != j) rest.push_back(gens[i]);
      koszul_add_term(out, xu, rest, (j % 2 == 0) ? f : -f);
    }
  }
  return out;
}

inline std::string koszul_to_string(const AlgebroidSpec& spec,
                                    const KoszulElement& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  for (const auto& [key, f] : e.terms) {
    const auto& [u, gens] = key;
    std::string idx;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (i) idx += ",";
      idx += std::to_string(u[i]);
    }
    std::string ext;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (i) ext += ",";
      ext += std::to_string(gens[i] + 1);
    }
    if (!out.empty()) out += " + ";
    out += "(" + f.to_string(spec.var_names) + ")*[x(" + idx + ")";
    if (!gens.empty()) out += " w(" + ext + ")";
    out += "]";
  }
  return out;
}

namespace detail {

inline std::vector<std::vector<int>> decreasing_subsets(int d, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // enumerate increasing combinations, then reverse each into the canonical
  // strictly decreasing storage order
  std::vector<int> comb(static_cast<std::size_t>(p));
  if (p == 0) {
    out.push_back({});
    return out;
  }
  if (p > d) return out;
  for (int i = 0; i < p; ++i) comb[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<int> dec(comb.rbegin(), comb.rend());
    out.push_back(dec);
    int i = p - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == d - p + i) --i;
    if (i < 0) break;
    comb[static_cast<std::size_t>(i)] += 1;
    for (int j = i + 1; j < p; ++j)
      comb[static_cast<std::size_t>(j)] =
          comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string koszul_label(const MultiIndex& u,
                                const std::vector<int>& gens) {
  std::string s = "x(";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(u[i]);
  }
  s += ")";
  if (!gens.empty()) {
    s += " w(";
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(gens[i] + 1);
    }
    s += ")";
  }
  return s;
}

}  // namespace detail

// The Koszul complex assembled degreewise, keeping the basis elements whose
// total degree (x-degree plus exterior degree) is at most the bound.  The
// differential preserves that total degree, so every kept graded strand is
// complete and the homology of the assembled window is exact: rank one in
// homological degree 0 and zero elsewhere.
inline GradedComplex koszul_complex(const AlgebroidSpec& spec, int bound) {
  if (bound < 0) throw SpecError("koszul bound must be nonnegative");
  std::map<int, std::vector<std::pair<MultiIndex, std::vector<int>>>> basis;
  for (int p = 0; p <= spec.d; ++p) {
    for (const auto& gens : detail::decreasing_subsets(spec.d, p))
      for (const auto& u : indices_up_to(spec.d, bound - p))
        basis[p].emplace_back(u, gens);
    std::sort(basis[p].begin(), basis[p].end());
  }
  std::map<int, std::size_t> ranks;
  std::map<int, std::vector<std::string>> labels;
  for (const auto& [p, els] : basis) {
    ranks[p] = els.size();
    for (const auto& [u, gens] : els)
      labels[p].push_back(detail::koszul_label(u, gens));
  }
  std::map<int, Matrix<Polynomial>> diffs;
  for (int p = 1; p <= spec.d; ++p) {
    std::map<std::pair<MultiIndex, std::vector<int>>, std::size_t> pos;
    for (std::size_t i = 0; i < basis[p - 1].size(); ++i)
      pos[basis[p - 1][i]] = i;
    Matrix<Polynomial> mat(basis[p - 1].size(), basis[p].size(),
                           Polynomial(spec.m));
    for (std::size_t col = 0; col < basis[p].size(); ++col) {
      KoszulElement e = koszul_zero(spec, bound);
      koszul_add_term(e, basis[p][col].first, basis[p][col].second,
                      Polynomial::constant(spec.m, 1));
      const KoszulElement de = koszul_diff(spec, e);
      for (const auto& [key, f] : de.terms) {
        auto it = pos.find(key);
        if (it == pos.end())
          throw SpecError("koszul strand escaped the assembled window");
        mat.at(it->second, col) += f;
      }
    }
    diffs.emplace(p, std::move(mat));
  }
  GradedComplex g = make_graded_complex("koszul", -1, std::move(ranks),
                                        std::move(diffs));
  g.labels = std::move(labels);
  return g;
}

// The dual complex of module maps from the Koszul resolution into the jet
// module, assembled by the dual total degree (x-degree of the value plus the
// count of missing exterior generators).  Kept strands are complete; the
// cohomology of the window is rank one in degree d and zero elsewhere.
inline GradedComplex koszul_dual_complex(const AlgebroidSpec& spec,
                                         int bound) {
  if (bound < 0) throw SpecError("koszul bound must be nonnegative");
  std::map<int, std::vector<std::pair<MultiIndex, std::vector<int>>>> basis;
  for (int p = 0; p <= spec.d; ++p) {
    for (const auto& gens : detail::decreasing_subsets(spec.d, p))
      for (const auto& v : indices_up_to(spec.d, bound - (spec.d - p)))
        basis[p].emplace_back(v, gens);
    std::sort(basis[p].begin(), basis[p].end());
  }
  std::map<int, std::size_t> ranks;
  std::map<int, std::vector<std::string>> labels;
  for (const auto& [p, els] : basis) {
    ranks[p] = els.size();
    for (const auto& [v, gens] : els)
      labels[p].push_back(detail::koszul_label(v, gens));
  }
  std::map<int, Matrix<Polynomial>> diffs;
  for (int p = 0; p < spec.d; ++p) {
    std::map<std::pair<MultiIndex, std::vector<int>>, std::size_t> pos;
    for (std::size_t i = 0; i < basis[p + 1].size(); ++i)
      pos[basis[p + 1][i]] = i;
    Matrix<Polynomial> mat(basis[p + 1].size(), basis[p].size(),
                           Polynomial(spec.m));
    for (std::size_t col = 0; col < basis[p].size(); ++col) {
      const auto& [v, gens] = basis[p][col];
      for (int t = 0; t < spec.d; ++t) {
        if (std::find(gens.begin(), gens.end(), t) != gens.end()) continue;
        std::vector<int> bigger = gens;
        bigger.push_back(t);
        std::sort(bigger.begin(), bigger.end(), std::greater<int>());
        int above = 0;
        for (int s : gens)
          if (s > t) ++above;
        MultiIndex xv = v;
        xv[static_cast<std::size_t>(t)] += 1;
        auto it = pos.find(std::make_pair(xv, bigger));
        if (it == pos.end())
          throw SpecError("koszul dual strand escaped the assembled window");
        mat.at(it->second, col) +=
            Polynomial::constant(spec.m, (above % 2 == 0) ? 1 : -1);
      }
    }
    diffs.emplace(p, std::move(mat));
  }
  GradedComplex g = make_graded_complex("koszul-dual", 1, std::move(ranks),
                                        std::move(diffs));
  g.labels = std::move(labels);
  return g;
}

// The Koszul complex reduced against the counit: every coordinate acts as
// zero, so the differentials vanish identically and the ranks are the
// binomial coefficients.
inline GradedComplex koszul_fiber_complex(const AlgebroidSpec& spec) {
  std::map<int, std::size_t> ranks;
  std::map<int, std::vector<std::string>> labels;
  std::map<int, Matrix<Polynomial>> diffs;
  std::map<int, std::vector<std::vector<int>>> basis;
  for (int p = 0; p <= spec.d; ++p) {
    basis[p] = detail::decreasing_subsets(spec.d, p);
    ranks[p] = basis[p].size();
    for (const auto& gens : basis[p])
      labels[p].push_back(
          detail::koszul_label(MultiIndex(static_cast<std::size_t>(spec.d), 0),
                               gens));
  }
  for (int p = 1; p <= spec.d; ++p) {
    // the image coefficients are the coordinates evaluated at the counit
    // point, i.e. zero
    diffs.emplace(p, Matrix<Polynomial>(basis[p - 1].size(), basis[p].size(),
                                        Polynomial(spec.m)));
  }
  GradedComplex g = make_graded_complex("koszul-fiber", -1, std::move(ranks),
                                        std::move(diffs));
  g.labels = std::move(labels);
  return g;
}

}  // namespace liejets
