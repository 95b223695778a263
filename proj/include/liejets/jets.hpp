#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "liejets/enveloping.hpp"
#include "liejets/matrix.hpp"

namespace liejets {

// Truncated jet: an R-linear functional on the enveloping algebra recorded by
// its values on the PBW basis, alpha(e^a) = coeffs[a], certified for |a| <
// order.  Values on higher filtration degrees are unknown, and every operation
// tracks how far its output stays exact.
class Jet {
 public:
  using CoeffMap = std::map<MultiIndex, Polynomial, GradedIndexLess>;

  Jet() : d_(0), m_(0), order_(0) {}
  Jet(int d, int m, int order) : d_(d), m_(m), order_(order) { assert(order >= 1); }

  int d() const { return d_; }
  int m() const { return m_; }
  int order() const { return order_; }
  bool is_zero() const { return coeffs_.empty(); }
  const CoeffMap& coeffs() const { return coeffs_; }

  Polynomial coeff(const MultiIndex& a) const {
    auto it = coeffs_.find(a);
    return it == coeffs_.end() ? Polynomial(m_) : it->second;
  }

  void add_term(const MultiIndex& a, const Polynomial& f) {
    assert(static_cast<int>(a.size()) == d_ && f.nvars() == m_);
    assert(degree(a) < order_);
    if (f.is_zero()) return;
    auto it = coeffs_.find(a);
    if (it == coeffs_.end()) {
      coeffs_.emplace(a, f);
      return;
    }
    it->second += f;
    if (it->second.is_zero()) coeffs_.erase(it);
  }

  Jet truncated(int new_order) const {
    assert(new_order >= 1 && new_order <= order_);
    Jet r(d_, m_, new_order);
    for (const auto& [a, f] : coeffs_)
      if (degree(a) < new_order) r.coeffs_.emplace(a, f);
    return r;
  }

  Jet& operator+=(const Jet& o) {
    assert(d_ == o.d_ && m_ == o.m_ && order_ == o.order_);
    for (const auto& [a, f] : o.coeffs_) add_term(a, f);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    assert(d_ == o.d_ && m_ == o.m_ && order_ == o.order_);
    for (const auto& [a, f] : o.coeffs_) add_term(a, -f);
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a) {
    Jet r(a.d_, a.m_, a.order_);
    for (const auto& [x, f] : a.coeffs_) r.coeffs_.emplace(x, -f);
    return r;
  }
  friend Jet operator*(const Polynomial& f, const Jet& a) {
    Jet r(a.d_, a.m_, a.order_);
    if (f.is_zero()) return r;
    for (const auto& [x, g] : a.coeffs_) {
      Polynomial p = f * g;
      if (!p.is_zero()) r.coeffs_.emplace(x, p);
    }
    return r;
  }
  friend Jet operator*(const Rational& c, const Jet& a) {
    Jet r(a.d_, a.m_, a.order_);
    if (c == 0) return r;
    for (const auto& [x, g] : a.coeffs_) r.coeffs_.emplace(x, c * g);
    return r;
  }

  // Strict: same certified order and same stored values.
  friend bool operator==(const Jet& a, const Jet& b) {
    return a.d_ == b.d_ && a.m_ == b.m_ && a.order_ == b.order_ &&
           a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

 private:
  int d_, m_, order_;
  CoeffMap coeffs_;
};

inline Jet jet_zero(const AlgebroidSpec& spec, int order) {
  return Jet(spec.d, spec.m, order);
}

// Dual basis element: xi_a(e^b) = delta_{ab}.
inline Jet jet_basis(const AlgebroidSpec& spec, const MultiIndex& a, int order) {
  if (degree(a) >= order)
    throw OrderError("basis jet index must have degree below the order");
  Jet r(spec.d, spec.m, order);
  r.add_term(a, Polynomial::constant(spec.m, 1));
  return r;
}

inline bool equal_at_order(const Jet& a, const Jet& b, int order) {
  if (a.d() != b.d() || a.m() != b.m()) return false;
  if (order > a.order() || order > b.order())
    throw OrderError("comparison order exceeds a certified order");
  return a.truncated(order) == b.truncated(order);
}

inline Jet jet_common(const Jet& a, int order) {
  return order == a.order() ? a : a.truncated(order);
}

inline Polynomial jet_eval(const AlgebroidSpec& spec, const Jet& alpha,
                           const UElement& dd) {
  if (dd.filtration_degree() >= alpha.order())
    throw OrderError("jet evaluated beyond its certified order");
  Polynomial out(spec.m);
  for (const auto& [b, g] : dd.terms()) out += g * alpha.coeff(b);
  return out;
}

// Commutative product dual to the coproduct: on the canonical expansion
// Delta(e^c) = sum f * (e^{k0} x e^{k1}) the value is
//   (alpha*beta)(e^c) = sum f * alpha(e^{k0}) * beta(e^{k1}),
// all products taken in the base ring.  Every cell satisfies
// |k0| + |k1| <= |c|, so the result is exact at the common certified order;
// mixed orders are an error by contract.
inline Jet jet_mul(const AlgebroidSpec& spec, const Jet& a, const Jet& b) {
  if (a.order() != b.order())
    throw OrderError("jet product requires operands of equal order");
  const int q = a.order();
  Jet out(spec.d, spec.m, q);
  for (const auto& c : indices_up_to(spec.d, q - 1)) {
    const UTensor delta = detail::coproduct_mono(spec, c);
    Polynomial val(spec.m);
    for (const auto& [k, f] : delta.terms()) {
      const Polynomial left = a.coeff(k[0]);
      if (left.is_zero()) continue;
      const Polynomial right = b.coeff(k[1]);
      if (right.is_zero()) continue;
      val += f * left * right;
    }
    if (!val.is_zero()) out.add_term(c, val);
  }
  return out;
}

// First flat structure, a left module structure over the enveloping algebra:
//   (nabla1_l alpha)(D) = rho(l)(alpha(D)) - alpha(l D)   for l in the frame,
//   nabla1_f = plain multiplication by f,
//   nabla1_{e^b} applies the rightmost generator factor of e^b first.
// Output is certified to order q - (filtration degree of the argument).
inline Jet nabla1(const AlgebroidSpec& spec, const UElement& dd, const Jet& alpha) {
  const int drop = std::max(dd.filtration_degree(), 0);
  if (alpha.order() - drop < 1)
    throw OrderError("order exhausted by first connection");
  const int out_order = alpha.order() - drop;
  Jet out(spec.d, spec.m, out_order);
  for (const auto& [b, f] : dd.terms()) {
    Jet work = alpha;
    for (int i = spec.d - 1; i >= 0; --i)
      for (int k = 0; k < b[static_cast<size_t>(i)]; ++k) {
        Jet next(spec.d, spec.m, work.order() - 1);
        for (const auto& c : indices_up_to(spec.d, work.order() - 2)) {
          Polynomial v = derivation_apply(spec.anchor[static_cast<size_t>(i)],
                                          work.coeff(c)) -
                         jet_eval(spec, work, detail::gen_times_mono(spec, i, c));
          if (!v.is_zero()) next.add_term(c, v);
        }
        work = next;
      }
    out += f * jet_common(work, out_order);
  }
  return out;
}

// Second flat structure: (nabla2_E alpha)(D) = alpha(D * E).  Certified order
// drops by the filtration degree of E; ring elements cost nothing.
inline Jet nabla2(const AlgebroidSpec& spec, const UElement& ee, const Jet& alpha) {
  const int drop = std::max(ee.filtration_degree(), 0);
  if (alpha.order() - drop < 1)
    throw OrderError("order exhausted by second connection");
  const int out_order = alpha.order() - drop;
  Jet out(spec.d, spec.m, out_order);
  for (const auto& c : indices_up_to(spec.d, out_order - 1)) {
    const Polynomial v =
        jet_eval(spec, alpha, u_mul(spec, u_mono(spec, c), ee));
    if (!v.is_zero()) out.add_term(c, v);
  }
  return out;
}

inline Rational index_factorial(const MultiIndex& a) {
  Integer f(1);
  for (int v : a)
    for (int k = 2; k <= v; ++k) f *= k;
  return Rational(f);
}

// Identification with the truncated polynomial algebra R[x_1..x_d]/(x)^q via
// xi_a <-> x^a / a!.  Variables are ordered y_1..y_m, x_1..x_d.
inline Polynomial local_coordinates(const AlgebroidSpec& spec, const Jet& alpha) {
  const int n = spec.m + spec.d;
  Polynomial out(n);
  for (const auto& [a, f] : alpha.coeffs()) {
    const Rational scale = Rational(1) / index_factorial(a);
    for (const auto& [ym, c] : f.terms()) {
      MultiIndex full = ym;
      full.insert(full.end(), a.begin(), a.end());
      out.add_term(full, c * scale);
    }
  }
  return out;
}

inline Jet jet_from_local(const AlgebroidSpec& spec, const Polynomial& p, int q) {
  assert(p.nvars() == spec.m + spec.d);
  Jet out(spec.d, spec.m, q);
  for (const auto& [full, c] : p.terms()) {
    MultiIndex ym(full.begin(), full.begin() + spec.m);
    MultiIndex a(full.begin() + spec.m, full.end());
    if (degree(a) >= q)
      throw OrderError("local representative exceeds the truncation order");
    out.add_term(a, Polynomial::monomial(spec.m, ym, c * index_factorial(a)));
  }
  return out;
}

inline Polynomial local_embed_base(const AlgebroidSpec& spec, const Polynomial& f) {
  assert(f.nvars() == spec.m);
  Polynomial out(spec.m + spec.d);
  for (const auto& [ym, c] : f.terms()) {
    MultiIndex full = ym;
    full.insert(full.end(), static_cast<size_t>(spec.d), 0);
    out.add_term(full, c);
  }
  return out;
}

inline int local_x_degree(const AlgebroidSpec& spec, const MultiIndex& full) {
  int s = 0;
  for (int i = 0; i < spec.d; ++i) s += full[static_cast<size_t>(spec.m + i)];
  return s;
}

inline Polynomial local_truncate(const AlgebroidSpec& spec, const Polynomial& p,
                                 int q) {
  Polynomial out(p.nvars());
  for (const auto& [full, c] : p.terms())
    if (local_x_degree(spec, full) < q) out.add_term(full, c);
  return out;
}

struct GramMatrix {
  int which = 1;  // 1: eps(nabla1_D alpha); 2: plain evaluation alpha(D)
  int q = 0;
  std::vector<MultiIndex> basis;  // indices of degree < q, graded order
  Matrix<Polynomial> mat;         // mat[row=beta][col=a] = <xi_a, e^beta>
};

namespace detail {

struct GramCache {
  std::mutex mu;
  std::map<std::tuple<std::string, int, int>, std::shared_ptr<const GramMatrix>>
      entries;
};

inline GramCache& gram_cache() {
  static GramCache c;
  return c;
}

}  // namespace detail

// Pairing matrix over the degree-< q window; rows are PBW indices, columns are
// dual-basis indices.  Entries are exact: a basis jet has finite support, so
// feeding it through the connections at window order never leaves the window.
inline std::shared_ptr<const GramMatrix> gram(const AlgebroidSpec& spec, int q,
                                              int which) {
  if (which != 1 && which != 2) throw SpecError("gram: which must be 1 or 2");
  if (q < 2) throw SpecError("gram: order must be >= 2");
  auto& cache = detail::gram_cache();
  const auto key = std::make_tuple(spec.fingerprint(), q, which);
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) return it->second;
  }
  auto gm = std::make_shared<GramMatrix>();
  gm->which = which;
  gm->q = q;
  gm->basis = indices_up_to(spec.d, q - 1);
  const size_t n = gm->basis.size();
  gm->mat = Matrix<Polynomial>(n, n, Polynomial(spec.m));
  for (size_t col = 0; col < n; ++col) {
    // The basis jet is exact at any order; order q+degree suffices for every row.
    const Jet xi = jet_basis(spec, gm->basis[col], q + 1);
    for (size_t row = 0; row < n; ++row) {
      const UElement eb = u_mono(spec, gm->basis[row]);
      Polynomial v(spec.m);
      if (which == 2) {
        v = jet_eval(spec, xi, eb);
      } else {
        const Jet moved = nabla1(spec, eb, xi);
        v = moved.coeff(MultiIndex(static_cast<size_t>(spec.d), 0));
      }
      gm->mat.at(row, col) = v;
    }
  }
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.entries.emplace(key, gm);
  return cache.entries.at(key);
}

inline std::string jet_to_string(const AlgebroidSpec& spec, const Jet& alpha) {
  if (alpha.is_zero()) return "0 (order " + std::to_string(alpha.order()) + ")";
  std::string out;
  for (const auto& [a, f] : alpha.coeffs()) {
    std::string idx;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i) idx += ",";
      idx += std::to_string(a[i]);
    }
    if (!out.empty()) out += " + ";
    out += "(" + f.to_string(spec.var_names) + ")*xi(" + idx + ")";
  }
  return out + " (order " + std::to_string(alpha.order()) + ")";
}

inline Jet sample_jet(Sampler& s, const AlgebroidSpec& spec, int order,
                      int terms = 3, int coeff_deg = 1) {
  Jet r(spec.d, spec.m, order);
  for (int t = 0; t < terms; ++t)
    r.add_term(s.index(spec.d, order - 1), s.polynomial(spec.m, coeff_deg, 2));
  return r;
}

}  // namespace liejets
