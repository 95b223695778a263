#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liejets/errors.hpp"
#include "liejets/polynomial.hpp"
#include "liejets/report.hpp"
#include "liejets/sampling.hpp"

namespace liejets {

// A locally free Lie algebroid over Q[y_1..y_m]: free module L = R^d with
// frame e_1..e_d, anchor rho(e_i) a vector field, and bracket determined by
// [e_i, e_j] = sum_k structure[(i,j)][k] * e_k for i < j.
struct AlgebroidSpec {
  std::string name = "unnamed";
  int m = 0;
  int d = 0;
  std::vector<std::string> var_names;
  std::vector<Derivation> anchor;
  std::map<std::pair<int, int>, std::vector<Polynomial>> structure;

  // Defaults used by reports and the command-line driver.
  int q = 4;
  int N = 3;
  int P = 3;
  std::vector<Rational> point;

  void validate() const {
    if (m < 1) throw SpecError(name + ": need at least one base variable");
    if (d < 1) throw SpecError(name + ": need frame rank at least 1");
    if (static_cast<int>(var_names.size()) != m)
      throw SpecError(name + ": variable name count != m");
    if (static_cast<int>(anchor.size()) != d)
      throw SpecError(name + ": anchor must have one vector field per generator");
    for (const auto& v : anchor) {
      if (v.nvars() != m) throw SpecError(name + ": anchor component count != m");
      for (const auto& p : v.comps)
        if (p.nvars() != m) throw SpecError(name + ": anchor polynomial arity != m");
    }
    for (const auto& [ij, cs] : structure) {
      if (!(0 <= ij.first && ij.first < ij.second && ij.second < d))
        throw SpecError(name + ": structure keys must satisfy 0 <= i < j < d");
      if (static_cast<int>(cs.size()) != d)
        throw SpecError(name + ": structure coefficient vector length != d");
      for (const auto& p : cs)
        if (p.nvars() != m) throw SpecError(name + ": structure polynomial arity != m");
    }
    if (static_cast<int>(point.size()) != m)
      throw SpecError(name + ": evaluation point arity != m");
    if (q < 2) throw SpecError(name + ": truncation order q must be >= 2");
    if (N < 1 || P < 1) throw SpecError(name + ": sweep bounds must be >= 1");
  }

  // Canonical content string (independent of display names); cache key.
  std::string fingerprint() const {
    std::string s = "m=" + std::to_string(m) + ";d=" + std::to_string(d) + ";anchor=[";
    for (int i = 0; i < d; ++i) {
      if (i) s += ";";
      for (int j = 0; j < m; ++j) {
        if (j) s += ",";
        s += anchor[static_cast<size_t>(i)].comps[static_cast<size_t>(j)].to_string();
      }
    }
    s += "];struct=[";
    bool first = true;
    for (const auto& [ij, cs] : structure) {
      if (!first) s += ";";
      first = false;
      s += std::to_string(ij.first) + "," + std::to_string(ij.second) + ":";
      for (int k = 0; k < d; ++k) {
        if (k) s += ",";
        s += cs[static_cast<size_t>(k)].to_string();
      }
    }
    return s + "]";
  }
};

// Section of L in the frame: comps[i] * e_i, each comps[i] in Q[y].
struct LElement {
  std::vector<Polynomial> comps;

  friend bool operator==(const LElement& a, const LElement& b) {
    return a.comps == b.comps;
  }

  bool is_zero() const {
    for (const auto& p : comps)
      if (!p.is_zero()) return false;
    return true;
  }
};

inline LElement l_zero(const AlgebroidSpec& spec) {
  LElement v;
  v.comps.assign(static_cast<size_t>(spec.d), Polynomial(spec.m));
  return v;
}

inline LElement l_generator(const AlgebroidSpec& spec, int i) {
  LElement v = l_zero(spec);
  v.comps[static_cast<size_t>(i)] = Polynomial::constant(spec.m, 1);
  return v;
}

inline LElement l_add(const LElement& a, const LElement& b) {
  LElement r = a;
  for (size_t i = 0; i < r.comps.size(); ++i) r.comps[i] += b.comps[i];
  return r;
}

inline LElement l_scale(const Polynomial& f, const LElement& a) {
  LElement r = a;
  for (auto& c : r.comps) c = f * c;
  return r;
}

inline LElement structure_bracket(const AlgebroidSpec& spec, int i, int j) {
  LElement r = l_zero(spec);
  if (i == j) return r;
  const bool flip = i > j;
  const auto key = flip ? std::make_pair(j, i) : std::make_pair(i, j);
  auto it = spec.structure.find(key);
  if (it == spec.structure.end()) return r;
  for (int k = 0; k < spec.d; ++k)
    r.comps[static_cast<size_t>(k)] =
        flip ? -it->second[static_cast<size_t>(k)] : it->second[static_cast<size_t>(k)];
  return r;
}

inline Derivation anchor_of(const AlgebroidSpec& spec, const LElement& a) {
  Derivation out = derivation_zero(spec.m);
  for (int i = 0; i < spec.d; ++i) {
    const Polynomial& fi = a.comps[static_cast<size_t>(i)];
    if (fi.is_zero()) continue;
    for (int j = 0; j < spec.m; ++j)
      out.comps[static_cast<size_t>(j)] +=
          fi * spec.anchor[static_cast<size_t>(i)].comps[static_cast<size_t>(j)];
  }
  return out;
}

inline Polynomial anchor_apply(const AlgebroidSpec& spec, const LElement& a,
                               const Polynomial& f) {
  return derivation_apply(anchor_of(spec, a), f);
}

// [a, b] = sum_{ij} a_i b_j [e_i,e_j] + sum_j (rho(a) b_j) e_j - sum_i (rho(b) a_i) e_i
inline LElement bracket(const AlgebroidSpec& spec, const LElement& a,
                        const LElement& b) {
  LElement out = l_zero(spec);
  for (int i = 0; i < spec.d; ++i) {
    const Polynomial& ai = a.comps[static_cast<size_t>(i)];
    if (ai.is_zero()) continue;
    for (int j = 0; j < spec.d; ++j) {
      const Polynomial& bj = b.comps[static_cast<size_t>(j)];
      if (bj.is_zero()) continue;
      const LElement cij = structure_bracket(spec, i, j);
      if (cij.is_zero()) continue;
      out = l_add(out, l_scale(ai * bj, cij));
    }
  }
  const Derivation ra = anchor_of(spec, a);
  const Derivation rb = anchor_of(spec, b);
  for (int j = 0; j < spec.d; ++j) {
    out.comps[static_cast<size_t>(j)] +=
        derivation_apply(ra, b.comps[static_cast<size_t>(j)]) -
        derivation_apply(rb, a.comps[static_cast<size_t>(j)]);
  }
  return out;
}

inline LElement sample_l(Sampler& s, const AlgebroidSpec& spec, int maxdeg = 2,
                         int terms = 2) {
  LElement v = l_zero(spec);
  for (auto& c : v.comps) c = s.polynomial(spec.m, maxdeg, terms);
  return v;
}

inline std::string l_to_string(const AlgebroidSpec& spec, const LElement& a) {
  std::string out;
  for (int i = 0; i < spec.d; ++i) {
    const Polynomial& c = a.comps[static_cast<size_t>(i)];
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string(spec.var_names) + ")*e" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

// Axiom gate: antisymmetry, Leibniz rule, anchor is a bracket morphism, and
// Jacobi, on all generator combinations plus seeded random sections.
inline Report check_axioms(const AlgebroidSpec& spec,
                           std::uint64_t seed = kDefaultSeed) {
  Report rep;
  rep.subject = "axioms(" + spec.name + ")";
  rep.seed = seed;
  try {
    spec.validate();
    rep.add("spec-shape", true);
  } catch (const SpecError& e) {
    rep.add("spec-shape", false, -1, e.what());
    return rep;
  }
  Sampler s(seed);

  std::vector<LElement> pool;
  for (int i = 0; i < spec.d; ++i) pool.push_back(l_generator(spec, i));
  for (int t = 0; t < 3; ++t) pool.push_back(sample_l(s, spec, 2, 2));

  bool ok = true;
  std::string witness;
  for (size_t i = 0; i < pool.size() && ok; ++i)
    for (size_t j = 0; j < pool.size() && ok; ++j) {
      if (!l_add(bracket(spec, pool[i], pool[j]), bracket(spec, pool[j], pool[i]))
               .is_zero()) {
        ok = false;
        witness = "[a,b] + [b,a] != 0 at pool indices " + std::to_string(i) + "," +
                  std::to_string(j);
      }
    }
  rep.add("bracket-antisymmetry", ok, -1, witness);

  ok = true;
  witness.clear();
  for (size_t i = 0; i < pool.size() && ok; ++i)
    for (size_t j = 0; j < pool.size() && ok; ++j) {
      const Derivation lhs = anchor_of(spec, bracket(spec, pool[i], pool[j]));
      const Derivation rhs =
          derivation_bracket(anchor_of(spec, pool[i]), anchor_of(spec, pool[j]));
      if (!(lhs == rhs)) {
        ok = false;
        witness = "rho([a,b]) != [rho(a),rho(b)] at pool indices " +
                  std::to_string(i) + "," + std::to_string(j);
      }
    }
  rep.add("anchor-morphism", ok, -1, witness);

  ok = true;
  witness.clear();
  std::vector<Polynomial> fs = {Polynomial::variable(spec.m, 0),
                                s.polynomial(spec.m, 2, 2)};
  for (size_t i = 0; i < pool.size() && ok; ++i)
    for (size_t j = 0; j < pool.size() && ok; ++j)
      for (const auto& f : fs) {
        const LElement lhs = bracket(spec, pool[i], l_scale(f, pool[j]));
        const LElement rhs = l_add(l_scale(f, bracket(spec, pool[i], pool[j])),
                                   l_scale(anchor_apply(spec, pool[i], f), pool[j]));
        if (!(lhs == rhs)) {
          ok = false;
          witness = "Leibniz fails at pool indices " + std::to_string(i) + "," +
                    std::to_string(j);
          break;
        }
      }
  rep.add("leibniz", ok, -1, witness);

  ok = true;
  witness.clear();
  auto jacobi = [&](const LElement& a, const LElement& b, const LElement& c) {
    return l_add(l_add(bracket(spec, bracket(spec, a, b), c),
                       bracket(spec, bracket(spec, b, c), a)),
                 bracket(spec, bracket(spec, c, a), b));
  };
  for (int i = 0; i < spec.d && ok; ++i)
    for (int j = 0; j < spec.d && ok; ++j)
      for (int k = 0; k < spec.d && ok; ++k) {
        const LElement jac = jacobi(l_generator(spec, i), l_generator(spec, j),
                                    l_generator(spec, k));
        if (!jac.is_zero()) {
          ok = false;
          witness = "J(e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) +
                    ",e" + std::to_string(k + 1) + ") = " + l_to_string(spec, jac);
        }
      }
  for (int t = 0; t < 2 && ok; ++t) {
    const LElement a = sample_l(s, spec, 1, 2), b = sample_l(s, spec, 1, 2),
                   c = sample_l(s, spec, 1, 2);
    if (!jacobi(a, b, c).is_zero()) {
      ok = false;
      witness = "Jacobi fails on random sections, trial " + std::to_string(t);
    }
  }
  rep.add("jacobi", ok, -1, witness);
  return rep;
}

// ---- bundled example specs ----

inline AlgebroidSpec tangent_spec(int m) {
  AlgebroidSpec s;
  s.name = "tangent" + std::to_string(m);
  s.m = m;
  s.d = m;
  s.var_names = default_var_names(m);
  for (int i = 0; i < m; ++i) {
    Derivation v = derivation_zero(m);
    v.comps[static_cast<size_t>(i)] = Polynomial::constant(m, 1);
    s.anchor.push_back(v);
  }
  s.point.assign(static_cast<size_t>(m), Rational(0));
  return s;
}

inline AlgebroidSpec abelian_spec(int d, int m = 1) {
  AlgebroidSpec s;
  s.name = "abelian" + std::to_string(d);
  s.m = m;
  s.d = d;
  s.var_names = default_var_names(m);
  s.anchor.assign(static_cast<size_t>(d), derivation_zero(m));
  s.point.assign(static_cast<size_t>(m), Rational(0));
  return s;
}

// [e1, e2] = e2, zero anchor: the 2-dimensional non-abelian Lie algebra over R.
inline AlgebroidSpec solvable_spec() {
  AlgebroidSpec s;
  s.name = "solvable2";
  s.m = 1;
  s.d = 2;
  s.var_names = default_var_names(1);
  s.anchor.assign(2, derivation_zero(1));
  std::vector<Polynomial> c(2, Polynomial(1));
  c[1] = Polynomial::constant(1, 1);
  s.structure[{0, 1}] = c;
  s.point = {Rational(0)};
  return s;
}

// Rank 1 with non-surjective anchor rho(e1) = y1 * d/dy1.
inline AlgebroidSpec anchored_rank1_spec() {
  AlgebroidSpec s;
  s.name = "anchored1";
  s.m = 1;
  s.d = 1;
  s.var_names = default_var_names(1);
  Derivation v = derivation_zero(1);
  v.comps[0] = Polynomial::variable(1, 0);
  s.anchor.push_back(v);
  s.point = {Rational(0)};
  return s;
}

// Deliberate Jacobi violation: [e1,e2] = e3, [e2,e3] = e2, [e1,e3] = 0.
inline AlgebroidSpec broken_spec() {
  AlgebroidSpec s;
  s.name = "broken3";
  s.m = 1;
  s.d = 3;
  s.var_names = default_var_names(1);
  s.anchor.assign(3, derivation_zero(1));
  std::vector<Polynomial> c12(3, Polynomial(1));
  c12[2] = Polynomial::constant(1, 1);
  s.structure[{0, 1}] = c12;
  std::vector<Polynomial> c23(3, Polynomial(1));
  c23[1] = Polynomial::constant(1, 1);
  s.structure[{1, 2}] = c23;
  s.point = {Rational(0)};
  return s;
}

inline std::vector<AlgebroidSpec> bundled_specs() {
  return {tangent_spec(1), tangent_spec(2), abelian_spec(2), solvable_spec(),
          anchored_rank1_spec()};
}

}  // namespace liejets
