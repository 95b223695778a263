#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "liejets/algebroid.hpp"
#include "liejets/multi_index.hpp"
#include "liejets/polynomial.hpp"

namespace liejets {

// Element of the enveloping algebra in PBW normal form:
//   sum over multi-indices a of  f_a(y) * e^a,  e^a = e_1^{a_1} ... e_d^{a_d},
// coefficients written on the left.  Products are rewritten into this form via
//   e_i * f = f * e_i + rho(e_i)(f)   and   e_j * e_i = e_i * e_j + [e_j, e_i].
class UElement {
 public:
  using TermMap = std::map<MultiIndex, Polynomial, GradedIndexLess>;

  UElement() : d_(0), m_(0) {}
  UElement(int d, int m) : d_(d), m_(m) {}

  int d() const { return d_; }
  int m() const { return m_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Polynomial coeff(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? Polynomial(m_) : it->second;
  }

  void add_term(const MultiIndex& a, const Polynomial& f) {
    assert(static_cast<int>(a.size()) == d_ && f.nvars() == m_);
    if (f.is_zero()) return;
    auto it = terms_.find(a);
    if (it == terms_.end()) {
      terms_.emplace(a, f);
      return;
    }
    it->second += f;
    if (it->second.is_zero()) terms_.erase(it);
  }

  UElement& operator+=(const UElement& o) {
    assert(d_ == o.d_ && m_ == o.m_);
    for (const auto& [a, f] : o.terms_) add_term(a, f);
    return *this;
  }
  UElement& operator-=(const UElement& o) {
    assert(d_ == o.d_ && m_ == o.m_);
    for (const auto& [a, f] : o.terms_) add_term(a, -f);
    return *this;
  }
  friend UElement operator+(UElement a, const UElement& b) { return a += b; }
  friend UElement operator-(UElement a, const UElement& b) { return a -= b; }
  friend UElement operator-(const UElement& a) {
    UElement r(a.d_, a.m_);
    for (const auto& [x, f] : a.terms_) r.terms_.emplace(x, -f);
    return r;
  }

  friend UElement operator*(const Polynomial& f, const UElement& a) {
    UElement r(a.d_, a.m_);
    if (f.is_zero()) return r;
    for (const auto& [x, g] : a.terms_) {
      Polynomial p = f * g;
      if (!p.is_zero()) r.terms_.emplace(x, p);
    }
    return r;
  }
  friend UElement operator*(const Rational& c, const UElement& a) {
    UElement r(a.d_, a.m_);
    if (c == 0) return r;
    for (const auto& [x, g] : a.terms_) r.terms_.emplace(x, c * g);
    return r;
  }

  friend bool operator==(const UElement& a, const UElement& b) {
    return a.d_ == b.d_ && a.m_ == b.m_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const UElement& a, const UElement& b) { return !(a == b); }

  int filtration_degree() const {  // max |a|; -1 for zero
    int deg = -1;
    for (const auto& [a, f] : terms_) deg = std::max(deg, degree(a));
    return deg;
  }

  UElement truncate_above(int maxdeg) const {
    UElement r(d_, m_);
    for (const auto& [a, f] : terms_)
      if (degree(a) <= maxdeg) r.terms_.emplace(a, f);
    return r;
  }

 private:
  int d_, m_;
  TermMap terms_;
};

inline UElement u_zero(const AlgebroidSpec& spec) { return UElement(spec.d, spec.m); }

inline UElement u_monomial(const AlgebroidSpec& spec, const MultiIndex& a,
                           const Polynomial& f) {
  UElement r(spec.d, spec.m);
  r.add_term(a, f);
  return r;
}

inline UElement u_mono(const AlgebroidSpec& spec, const MultiIndex& a) {
  return u_monomial(spec, a, Polynomial::constant(spec.m, 1));
}

inline UElement u_one(const AlgebroidSpec& spec) {
  return u_mono(spec, MultiIndex(static_cast<size_t>(spec.d), 0));
}

inline UElement u_scalar(const AlgebroidSpec& spec, const Polynomial& f) {
  return u_monomial(spec, MultiIndex(static_cast<size_t>(spec.d), 0), f);
}

inline UElement u_gen(const AlgebroidSpec& spec, int i) {
  return u_mono(spec, unit_index(spec.d, i));
}

inline UElement u_from_l(const AlgebroidSpec& spec, const LElement& v) {
  UElement r(spec.d, spec.m);
  for (int i = 0; i < spec.d; ++i)
    r.add_term(unit_index(spec.d, i), v.comps[static_cast<size_t>(i)]);
  return r;
}

// PBW basis indices of filtration degree <= maxdeg.
inline std::vector<MultiIndex> u_basis(int d, int maxdeg) {
  return indices_up_to(d, maxdeg);
}

namespace detail {

struct UCache {
  std::mutex mu;
  std::map<std::tuple<std::string, int, MultiIndex>, std::shared_ptr<const UElement>>
      gen_mono;
};

inline UCache& u_cache() {
  static UCache c;
  return c;
}

UElement gen_times_mono(const AlgebroidSpec& spec, int i, const MultiIndex& b);

// e_i * X for X in normal form.
inline UElement gen_times(const AlgebroidSpec& spec, int i, const UElement& x) {
  UElement out(spec.d, spec.m);
  for (const auto& [g, f] : x.terms()) {
    out += f * gen_times_mono(spec, i, g);
    const Polynomial df =
        derivation_apply(spec.anchor[static_cast<size_t>(i)], f);
    if (!df.is_zero()) out.add_term(g, df);
  }
  return out;
}

// e_i * e^b in normal form.
inline UElement gen_times_mono_impl(const AlgebroidSpec& spec, int i,
                                    const MultiIndex& b) {
  if (is_zero_index(b)) return u_gen(spec, i);
  int j = 0;
  while (b[static_cast<size_t>(j)] == 0) ++j;
  if (i <= j) {
    MultiIndex a = b;
    a[static_cast<size_t>(i)] += 1;
    return u_mono(spec, a);
  }
  MultiIndex rest = b;
  rest[static_cast<size_t>(j)] -= 1;
  UElement out = gen_times(spec, j, gen_times_mono(spec, i, rest));
  const LElement br = structure_bracket(spec, i, j);
  for (int k = 0; k < spec.d; ++k) {
    const Polynomial& ck = br.comps[static_cast<size_t>(k)];
    if (!ck.is_zero()) out += ck * gen_times_mono(spec, k, rest);
  }
  return out;
}

inline UElement gen_times_mono(const AlgebroidSpec& spec, int i,
                               const MultiIndex& b) {
  auto& cache = u_cache();
  const auto key = std::make_tuple(spec.fingerprint(), i, b);
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.gen_mono.find(key);
    if (it != cache.gen_mono.end()) return *it->second;
  }
  UElement r = gen_times_mono_impl(spec, i, b);
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.gen_mono.emplace(key, std::make_shared<const UElement>(r));
  return r;
}

// e^a * X.
inline UElement mono_times_u(const AlgebroidSpec& spec, const MultiIndex& a,
                             UElement x) {
  MultiIndex rest = a;
  for (int i = spec.d - 1; i >= 0; --i)
    while (rest[static_cast<size_t>(i)] > 0) {
      rest[static_cast<size_t>(i)] -= 1;
      x = gen_times(spec, i, x);
    }
  return x;
}

}  // namespace detail

inline UElement u_mul(const AlgebroidSpec& spec, const UElement& a,
                      const UElement& b) {
  assert(a.d() == spec.d && b.d() == spec.d);
  UElement out(spec.d, spec.m);
  for (const auto& [x, f] : a.terms())
    out += f * detail::mono_times_u(spec, x, b);
  return out;
}

inline UElement u_mul(const AlgebroidSpec& spec, const UElement& a,
                      const Polynomial& r) {
  return u_mul(spec, a, u_scalar(spec, r));
}

// Action on the base ring through the anchor; rightmost generator factor of
// e^a = e_1^{a_1} ... e_d^{a_d} acts first.
inline Polynomial u_act(const AlgebroidSpec& spec, const UElement& dd,
                        const Polynomial& r) {
  Polynomial out(spec.m);
  for (const auto& [a, f] : dd.terms()) {
    Polynomial v = r;
    for (int i = spec.d - 1; i >= 0 && !v.is_zero(); --i)
      for (int k = 0; k < a[static_cast<size_t>(i)] && !v.is_zero(); ++k)
        v = derivation_apply(spec.anchor[static_cast<size_t>(i)], v);
    out += f * v;
  }
  return out;
}

inline Polynomial u_counit(const AlgebroidSpec& spec, const UElement& dd) {
  return dd.coeff(MultiIndex(static_cast<size_t>(spec.d), 0));
}

// Tensor power of the enveloping algebra with all scalar coefficients pushed
// into the leftmost slot:  terms  f * (e^{t_0} x ... x e^{t_{p-1}})  with the
// polynomial f attached to slot 0 from the left.  The push is exact: a left
// coefficient g appearing on slot k>0 is moved across the tensor sign by
// right-multiplying slot k-1 by g and renormalizing, which is the relation
// defining the tensor product over the base ring.
class UTensor {
 public:
  using TermMap = std::map<IndexTuple, Polynomial, TupleLess>;

  UTensor() : d_(0), m_(0), arity_(0) {}
  UTensor(int d, int m, int arity) : d_(d), m_(m), arity_(arity) {}

  int d() const { return d_; }
  int m() const { return m_; }
  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Polynomial coeff(const IndexTuple& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? Polynomial(m_) : it->second;
  }

  void add_term(const IndexTuple& t, const Polynomial& f) {
    assert(static_cast<int>(t.size()) == arity_ && f.nvars() == m_);
    if (f.is_zero()) return;
    auto it = terms_.find(t);
    if (it == terms_.end()) {
      terms_.emplace(t, f);
      return;
    }
    it->second += f;
    if (it->second.is_zero()) terms_.erase(it);
  }

  UTensor& operator+=(const UTensor& o) {
    assert(d_ == o.d_ && m_ == o.m_ && arity_ == o.arity_);
    for (const auto& [t, f] : o.terms_) add_term(t, f);
    return *this;
  }
  UTensor& operator-=(const UTensor& o) {
    assert(d_ == o.d_ && m_ == o.m_ && arity_ == o.arity_);
    for (const auto& [t, f] : o.terms_) add_term(t, -f);
    return *this;
  }
  friend UTensor operator+(UTensor a, const UTensor& b) { return a += b; }
  friend UTensor operator-(UTensor a, const UTensor& b) { return a -= b; }
  friend UTensor operator-(const UTensor& a) {
    UTensor r(a.d_, a.m_, a.arity_);
    for (const auto& [t, f] : a.terms_) r.terms_.emplace(t, -f);
    return r;
  }
  friend UTensor operator*(const Polynomial& f, const UTensor& a) {
    UTensor r(a.d_, a.m_, a.arity_);
    if (f.is_zero()) return r;
    for (const auto& [t, g] : a.terms_) {
      Polynomial p = f * g;
      if (!p.is_zero()) r.terms_.emplace(t, p);
    }
    return r;
  }
  friend UTensor operator*(const Rational& c, const UTensor& a) {
    UTensor r(a.d_, a.m_, a.arity_);
    if (c == 0) return r;
    for (const auto& [t, g] : a.terms_) r.terms_.emplace(t, c * g);
    return r;
  }
  friend bool operator==(const UTensor& a, const UTensor& b) {
    return a.d_ == b.d_ && a.m_ == b.m_ && a.arity_ == b.arity_ &&
           a.terms_ == b.terms_;
  }
  friend bool operator!=(const UTensor& a, const UTensor& b) { return !(a == b); }

 private:
  int d_, m_, arity_;
  TermMap terms_;
};

inline UTensor u_tensor_unit(const AlgebroidSpec& spec) {
  UTensor t(spec.d, spec.m, 0);
  t.add_term({}, Polynomial::constant(spec.m, 1));
  return t;
}

// Right-multiply the last slot by a base-ring element and renormalize.
inline UTensor tensor_push_right(const AlgebroidSpec& spec, const UTensor& t,
                                 const Polynomial& g) {
  assert(t.arity() >= 1);
  UTensor out(spec.d, spec.m, t.arity());
  if (g.is_zero()) return out;
  for (const auto& [key, f] : t.terms()) {
    const UElement prod =
        detail::mono_times_u(spec, key.back(), u_scalar(spec, g));
    if (t.arity() == 1) {
      for (const auto& [z, h] : prod.terms()) out.add_term({z}, f * h);
      continue;
    }
    UTensor prefix(spec.d, spec.m, t.arity() - 1);
    prefix.add_term(IndexTuple(key.begin(), key.end() - 1), f);
    for (const auto& [z, h] : prod.terms()) {
      const UTensor moved = tensor_push_right(spec, prefix, h);
      for (const auto& [pk, pf] : moved.terms()) {
        IndexTuple nk = pk;
        nk.push_back(z);
        out.add_term(nk, pf);
      }
    }
  }
  return out;
}

// T ⊗ u for a general normal-form factor u.
inline UTensor tensor_append(const AlgebroidSpec& spec, const UTensor& t,
                             const UElement& u) {
  UTensor out(spec.d, spec.m, t.arity() + 1);
  if (t.arity() == 0) {
    const Polynomial c = t.coeff({});
    if (c.is_zero()) return out;
    for (const auto& [z, h] : u.terms()) out.add_term({z}, c * h);
    return out;
  }
  for (const auto& [z, h] : u.terms()) {
    const UTensor moved = tensor_push_right(spec, t, h);
    for (const auto& [pk, pf] : moved.terms()) {
      IndexTuple nk = pk;
      nk.push_back(z);
      out.add_term(nk, pf);
    }
  }
  return out;
}

inline UTensor tensor_from_factors(const AlgebroidSpec& spec,
                                   const std::vector<UElement>& factors) {
  UTensor t = u_tensor_unit(spec);
  for (const auto& u : factors) t = tensor_append(spec, t, u);
  return t;
}

// Slotwise product of equal-arity tensors.
inline UTensor tensor_mul(const AlgebroidSpec& spec, const UTensor& a,
                          const UTensor& b) {
  assert(a.arity() == b.arity());
  UTensor out(spec.d, spec.m, a.arity());
  for (const auto& [ak, af] : a.terms())
    for (const auto& [bk, bf] : b.terms()) {
      std::vector<UElement> factors;
      factors.reserve(static_cast<size_t>(a.arity()));
      for (int s = 0; s < a.arity(); ++s) {
        UElement rhs = u_mono(spec, bk[static_cast<size_t>(s)]);
        if (s == 0) rhs = bf * rhs;
        factors.push_back(
            detail::mono_times_u(spec, ak[static_cast<size_t>(s)], rhs));
      }
      if (!factors.empty()) factors[0] = af * factors[0];
      UTensor term = tensor_from_factors(spec, factors);
      if (a.arity() == 0) term = (af * bf) * term;
      out += term;
    }
  return out;
}

namespace detail {

struct CoproductCache {
  std::mutex mu;
  std::map<std::pair<std::string, MultiIndex>, std::shared_ptr<const UTensor>> mono;
};

inline CoproductCache& coproduct_cache() {
  static CoproductCache c;
  return c;
}

inline UTensor coproduct_mono(const AlgebroidSpec& spec, const MultiIndex& a) {
  if (is_zero_index(a)) {
    UTensor t(spec.d, spec.m, 2);
    t.add_term({a, a}, Polynomial::constant(spec.m, 1));
    return t;
  }
  auto& cache = coproduct_cache();
  const auto key = std::make_pair(spec.fingerprint(), a);
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.mono.find(key);
    if (it != cache.mono.end()) return *it->second;
  }
  int i = spec.d - 1;
  while (a[static_cast<size_t>(i)] == 0) --i;
  MultiIndex rest = a;
  rest[static_cast<size_t>(i)] -= 1;
  const UTensor prev = coproduct_mono(spec, rest);
  // Delta(e^a) = Delta(e^rest) * (e_i x 1 + 1 x e_i)
  UTensor out(spec.d, spec.m, 2);
  const UElement ei = u_gen(spec, i);
  for (const auto& [k, f] : prev.terms()) {
    UTensor left(spec.d, spec.m, 1);
    left.add_term({k[0]}, f);
    {  // * (e_i x 1)
      UTensor t(spec.d, spec.m, 1);
      const UElement prod = mono_times_u(spec, k[0], ei);
      for (const auto& [z, h] : prod.terms()) t.add_term({z}, f * h);
      for (const auto& [pk, pf] : t.terms()) out.add_term({pk[0], k[1]}, pf);
    }
    {  // * (1 x e_i)
      const UElement right = mono_times_u(spec, k[1], ei);
      for (const auto& [z, h] : right.terms()) {
        const UTensor moved = tensor_push_right(spec, left, h);
        for (const auto& [pk, pf] : moved.terms()) out.add_term({pk[0], z}, pf);
      }
    }
  }
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.mono.emplace(key, std::make_shared<const UTensor>(out));
  return out;
}

}  // namespace detail

// Coproduct: Delta(f) = f x 1, Delta(l) = l x 1 + 1 x l, multiplicative on
// products; every right coefficient slides across the tensor sign, so the
// result is stored in slot-0 normal form.
inline UTensor u_coproduct(const AlgebroidSpec& spec, const UElement& dd) {
  UTensor out(spec.d, spec.m, 2);
  for (const auto& [a, f] : dd.terms())
    out += f * detail::coproduct_mono(spec, a);
  return out;
}

inline std::string u_to_string(const AlgebroidSpec& spec, const UElement& dd) {
  if (dd.is_zero()) return "0";
  std::string out;
  for (const auto& [a, f] : dd.terms()) {
    std::string mono;
    for (int i = 0; i < spec.d; ++i) {
      if (a[static_cast<size_t>(i)] == 0) continue;
      if (!mono.empty()) mono += " ";
      mono += "e" + std::to_string(i + 1);
      if (a[static_cast<size_t>(i)] != 1)
        mono += "^" + std::to_string(a[static_cast<size_t>(i)]);
    }
    std::string term = "(" + f.to_string(spec.var_names) + ")";
    if (!mono.empty()) term += " * " + mono;
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out;
}

inline std::string tensor_to_string(const AlgebroidSpec& spec, const UTensor& t) {
  if (t.is_zero()) return "0";
  std::string out;
  for (const auto& [k, f] : t.terms()) {
    std::string term = "(" + f.to_string(spec.var_names) + ")*[";
    for (size_t s = 0; s < k.size(); ++s) {
      if (s) term += " x ";
      std::string mono;
      for (int i = 0; i < spec.d; ++i) {
        if (k[s][static_cast<size_t>(i)] == 0) continue;
        if (!mono.empty()) mono += " ";
        mono += "e" + std::to_string(i + 1);
        if (k[s][static_cast<size_t>(i)] != 1)
          mono += "^" + std::to_string(k[s][static_cast<size_t>(i)]);
      }
      term += mono.empty() ? "1" : mono;
    }
    term += "]";
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out;
}

inline UElement sample_u(Sampler& s, const AlgebroidSpec& spec, int maxdeg = 2,
                         int terms = 2, int coeff_deg = 1) {
  UElement r(spec.d, spec.m);
  for (int t = 0; t < terms; ++t)
    r.add_term(s.index(spec.d, maxdeg), s.polynomial(spec.m, coeff_deg, 2));
  return r;
}

}  // namespace liejets
