#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "liejets/jets.hpp"
#include "liejets/parallel.hpp"

namespace liejets {

// Source-side unit: 1_1(r) acts by r * eps, i.e. the jet r * xi_0.
inline Jet unit_1(const AlgebroidSpec& spec, const Polynomial& r, int q) {
  Jet out(spec.d, spec.m, q);
  out.add_term(MultiIndex(static_cast<size_t>(spec.d), 0), r);
  return out;
}

// Target-side unit: 1_2(r)(D) = D(r); infinite support over a nontrivial
// anchor, truncated to the certified window.
inline Jet unit_2(const AlgebroidSpec& spec, const Polynomial& r, int q) {
  Jet out(spec.d, spec.m, q);
  for (const auto& c : indices_up_to(spec.d, q - 1))
    out.add_term(c, u_act(spec, u_mono(spec, c), r));
  return out;
}

inline Polynomial jet_counit(const Jet& alpha) {
  return alpha.coeff(MultiIndex(static_cast<size_t>(alpha.d()), 0));
}

// which=2: plain evaluation alpha(D).
// which=1: eps(nabla1_D alpha) — R-linear against the 1_2-twisted structure.
inline Polynomial pairing(const AlgebroidSpec& spec, const Jet& alpha,
                          const UElement& dd, int which) {
  if (which == 2) return jet_eval(spec, alpha, dd);
  if (which != 1) throw SpecError("pairing: which must be 1 or 2");
  if (dd.is_zero()) return Polynomial(spec.m);
  return jet_counit(nabla1(spec, dd, alpha));
}

// Expansion of a jet in the 1_2-twisted basis: lambda = sum_w 1_2(rho_w)*xi_w
// on the stored window.  Unitriangular in the degree grading, hence exact:
// the degree-|w| coefficient of 1_2(rho)*xi_w is rho itself and everything
// else lands strictly higher.
inline std::map<MultiIndex, Polynomial, GradedIndexLess> twisted_expansion(
    const AlgebroidSpec& spec, const Jet& lambda) {
  std::map<MultiIndex, Polynomial, GradedIndexLess> rho;
  const int q = lambda.order();
  Jet res = lambda;
  for (const auto& w : indices_up_to(spec.d, q - 1)) {
    const Polynomial rw = res.coeff(w);
    if (rw.is_zero()) continue;
    rho.emplace(w, rw);
    res -= jet_mul(spec, unit_2(spec, rw, q), jet_basis(spec, w, q));
  }
  return rho;
}

// Canonical coordinates of a tensor over the jet algebra: every slot except
// the last is a pure dual-basis index and the whole coefficient sits plainly
// on the last slot, using the relation (1_2(r) alpha) x beta = alpha x r*beta.
// Keys are index tuples, values the plain coefficient; only cells inside the
// total-degree window |t_0| + ... + |t_last| < q are kept (that window is all
// the truncation certifies).
using CellMap = std::map<IndexTuple, Polynomial, TupleLess>;

inline void add_cell(CellMap& cells, const IndexTuple& t, const Polynomial& f) {
  if (f.is_zero()) return;
  auto it = cells.find(t);
  if (it == cells.end()) {
    cells.emplace(t, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) cells.erase(it);
}

inline CellMap canonicalize2(const AlgebroidSpec& spec,
                             const std::vector<std::pair<Jet, Jet>>& raw, int q) {
  CellMap cells;
  for (const auto& [lambda, mu] : raw) {
    if (lambda.order() < q || mu.order() < q)
      throw OrderError("canonical form needs both slots certified to the window");
    const auto rho = twisted_expansion(spec, lambda.truncated(q));
    for (const auto& [w, rw] : rho) {
      const Jet nu = rw * mu.truncated(q);
      for (const auto& [b, f] : nu.coeffs())
        if (degree(w) + degree(b) < q) add_cell(cells, {w, b}, f);
    }
  }
  return cells;
}

inline CellMap canonicalize3(const AlgebroidSpec& spec,
                             const std::vector<std::array<Jet, 3>>& raw, int q) {
  CellMap cells;
  for (const auto& t : raw) {
    if (t[0].order() < q || t[1].order() < q || t[2].order() < q)
      throw OrderError("canonical form needs all slots certified to the window");
    const auto rho = twisted_expansion(spec, t[0].truncated(q));
    for (const auto& [w, rw] : rho) {
      if (degree(w) >= q) continue;
      const auto rho2 =
          twisted_expansion(spec, (rw * t[1].truncated(q)).truncated(q));
      for (const auto& [u, ru] : rho2) {
        if (degree(w) + degree(u) >= q) continue;
        const Jet nu = ru * t[2].truncated(q);
        for (const auto& [b, f] : nu.coeffs())
          if (degree(w) + degree(u) + degree(b) < q) add_cell(cells, {w, u, b}, f);
      }
    }
  }
  return cells;
}

inline std::string cells_to_string(const AlgebroidSpec& spec, const CellMap& cells) {
  if (cells.empty()) return "0";
  std::string out;
  for (const auto& [t, f] : cells) {
    std::string key;
    for (size_t s = 0; s < t.size(); ++s) {
      if (s) key += " x ";
      std::string idx;
      for (size_t i = 0; i < t[s].size(); ++i) {
        if (i) idx += ",";
        idx += std::to_string(t[s][i]);
      }
      key += "xi(" + idx + ")";
    }
    if (!out.empty()) out += " + ";
    out += "(" + f.to_string(spec.var_names) + ")*[" + key + "]";
  }
  return out;
}

// Full groupoid package at one truncation order: first Gram matrix and its
// inverse, coproduct coefficients of every dual basis jet on the total-degree
// window, and the antipode of every dual basis jet in plain coordinates.
struct GroupoidData {
  AlgebroidSpec spec;
  int q = 0;
  std::vector<MultiIndex> basis;  // degree < q, graded order
  std::shared_ptr<const GramMatrix> g1;
  Matrix<Polynomial> ig1;
  Rational det_g1;
  // delta[pos(m)] maps (pos(a), pos(b)) -> c_ab with
  //   Delta(xi_m) = sum_ab xi_a x (c_ab * xi_b),   |a| + |b| < q.
  std::vector<std::map<std::pair<size_t, size_t>, Polynomial>> delta;
  std::vector<Jet> antipode_plain;  // S(xi_a) at order q

  size_t pos(const MultiIndex& a) const {
    GradedIndexLess less;
    size_t lo = 0, hi = basis.size();
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (less(basis[mid], a))
        lo = mid + 1;
      else
        hi = mid;
    }
    assert(lo < basis.size() && basis[lo] == a);
    return lo;
  }
};

inline GroupoidData build_groupoid(const AlgebroidSpec& spec, int q, int jobs = 1) {
  if (q < 2) throw OrderError("groupoid construction needs order >= 2");
  GroupoidData gd;
  gd.spec = spec;
  gd.q = q;
  gd.basis = indices_up_to(spec.d, q - 1);
  gd.g1 = gram(spec, q, 1);
  gd.ig1 = poly_inverse(gd.g1->mat, &gd.det_g1);
  const size_t n = gd.basis.size();

  // Sizes of the leading blocks: block_end[k] = #indices of degree < k.
  std::vector<size_t> block_end(static_cast<size_t>(q) + 1, 0);
  for (size_t i = 0; i < n; ++i)
    for (int k = degree(gd.basis[i]) + 1; k <= q; ++k)
      block_end[static_cast<size_t>(k)]++;

  gd.delta.assign(n, {});
  detail::parallel_for(n, jobs, [&](size_t mi) {
    const MultiIndex& m = gd.basis[mi];
    const Jet xim = jet_basis(spec, m, 2 * q);  // exact at any order
    auto& cells = gd.delta[mi];
    for (size_t gi = 0; gi < n; ++gi) {
      const MultiIndex& g = gd.basis[gi];
      const size_t nb = block_end[static_cast<size_t>(q - degree(g))];
      if (nb == 0) continue;
      const Jet after2 = nabla2(spec, u_mono(spec, g), xim);
      Matrix<Polynomial> rhs(nb, 1, Polynomial(spec.m));
      for (size_t bi = 0; bi < nb; ++bi) {
        const Jet moved = nabla1(spec, u_mono(spec, gd.basis[bi]), after2);
        rhs.at(bi, 0) = jet_counit(moved);
      }
      Matrix<Polynomial> sub(nb, nb, Polynomial(spec.m));
      for (size_t r = 0; r < nb; ++r)
        for (size_t c = 0; c < nb; ++c) sub.at(r, c) = gd.g1->mat.at(r, c);
      const Matrix<Polynomial> sol = poly_solve(sub, rhs);
      for (size_t ai = 0; ai < nb; ++ai)
        if (!sol.at(ai, 0).is_zero()) cells[{ai, gi}] = sol.at(ai, 0);
    }
  });

  gd.antipode_plain.assign(n, Jet(spec.d, spec.m, q));
  detail::parallel_for(n, jobs, [&](size_t ai) {
    Jet s(spec.d, spec.m, q);
    for (size_t wi = 0; wi < n; ++wi) {
      const Polynomial& sigma = gd.ig1.at(wi, ai);
      if (sigma.is_zero()) continue;
      s += jet_mul(spec, unit_2(spec, sigma, q),
                   jet_basis(spec, gd.basis[wi], q));
    }
    gd.antipode_plain[ai] = s;
  });
  return gd;
}

// Coproduct of a general jet in canonical coordinates on the window
// |a| + |b| < min(q, order of the argument).  Left-plain coefficients of the
// argument land on slot 0 and are then pushed right.
inline CellMap groupoid_coproduct(const GroupoidData& gd, const Jet& alpha) {
  const AlgebroidSpec& spec = gd.spec;
  const int window = std::min(gd.q, alpha.order());
  std::vector<std::pair<Jet, Jet>> raw;
  for (const auto& [m, f] : alpha.coeffs()) {
    const auto& cells = gd.delta[gd.pos(m)];
    for (const auto& [ab, c] : cells) {
      raw.emplace_back(f * jet_basis(spec, gd.basis[ab.first], gd.q),
                       c * jet_basis(spec, gd.basis[ab.second], gd.q));
    }
  }
  return canonicalize2(spec, raw, window);
}

inline Jet antipode(const GroupoidData& gd, const Jet& alpha) {
  const AlgebroidSpec& spec = gd.spec;
  if (alpha.order() < gd.q)
    throw OrderError("antipode table built at a higher order than the argument");
  Jet out(spec.d, spec.m, gd.q);
  const Jet cut = alpha.truncated(gd.q);
  for (const auto& [g, f] : cut.coeffs())
    out += jet_mul(spec, unit_2(spec, f, gd.q), gd.antipode_plain[gd.pos(g)]);
  return out;
}

// Evaluation oracle for the coproduct: xi_m(e^b * e^g) must equal
// sum_a xi_a(e^b * c_ag).  Checks one instance exactly.
inline bool coproduct_evaluation_check(const GroupoidData& gd, const MultiIndex& m,
                                       const MultiIndex& b, const MultiIndex& g) {
  const AlgebroidSpec& spec = gd.spec;
  if (degree(b) + degree(g) >= gd.q)
    throw OrderError("oracle instance outside the certified window");
  const Jet xim = jet_basis(spec, m, gd.q);
  const Polynomial lhs =
      jet_eval(spec, xim, u_mul(spec, u_mono(spec, b), u_mono(spec, g)));
  Polynomial rhs(spec.m);
  const size_t gi = gd.pos(g);
  for (const auto& [ab, c] : gd.delta[gd.pos(m)]) {
    if (ab.second != gi) continue;
    const Jet xia = jet_basis(spec, gd.basis[ab.first], gd.q);
    rhs += jet_eval(spec, xia, u_mul(spec, u_mono(spec, b), u_scalar(spec, c)));
  }
  return lhs == rhs;
}

namespace detail {

inline CellMap delta_cells(const GroupoidData& gd, size_t mi, int window) {
  CellMap out;
  for (const auto& [ab, c] : gd.delta[mi]) {
    const MultiIndex& a = gd.basis[ab.first];
    const MultiIndex& b = gd.basis[ab.second];
    if (degree(a) + degree(b) < window) add_cell(out, {a, b}, c);
  }
  return out;
}

}  // namespace detail

// The full identity suite for the truncated formal groupoid.
inline Report verify_groupoid(const GroupoidData& gd,
                              std::uint64_t seed = kDefaultSeed, int jobs = 1) {
  const AlgebroidSpec& spec = gd.spec;
  const int q = gd.q;
  Report rep;
  rep.subject = "groupoid(" + spec.name + ", q=" + std::to_string(q) + ")";
  rep.seed = seed;
  Sampler s(seed);
  const size_t n = gd.basis.size();
  const MultiIndex zero(static_cast<size_t>(spec.d), 0);

  {  // plain Gram matrix is the identity
    auto g2 = gram(spec, q, 2);
    rep.add("gram2-identity", g2->mat == poly_identity(n, spec.m), q);
  }
  {  // twisted Gram matrix: graded-triangular, det +-1, signed diagonal
    bool tri = true, diag = true;
    for (size_t r = 0; r < n && tri; ++r)
      for (size_t c = 0; c < n; ++c) {
        const Polynomial& e = gd.g1->mat.at(r, c);
        if (e.is_zero()) continue;
        if (degree(gd.basis[c]) > degree(gd.basis[r])) {
          tri = false;
          break;
        }
        if (degree(gd.basis[c]) == degree(gd.basis[r])) {
          const bool on_diag = r == c;
          const Rational want = (degree(gd.basis[r]) % 2 == 0) ? 1 : -1;
          if (!on_diag || e != Polynomial::constant(spec.m, want)) diag = false;
        }
      }
    rep.add("gram1-graded-triangular", tri, q);
    rep.add("gram1-signed-diagonal", diag, q);
    rep.add("gram1-det-unit", gd.det_g1 == 1 || gd.det_g1 == -1, q,
            "det = " + rational_to_string(gd.det_g1));
  }
  {  // counits of the two units
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Polynomial r = s.polynomial(spec.m, 2, 2);
      ok = jet_counit(unit_1(spec, r, q)) == r && jet_counit(unit_2(spec, r, q)) == r;
    }
    rep.add("unit-counit", ok, q);
  }
  {  // units are algebra-compatible: 1_i(1) = xi_0, 1_i(rs) = 1_i(r)*1_i(s)
    bool ok = unit_1(spec, Polynomial::constant(spec.m, 1), q) ==
                  jet_basis(spec, zero, q) &&
              unit_2(spec, Polynomial::constant(spec.m, 1), q) ==
                  jet_basis(spec, zero, q);
    for (int t = 0; t < 2 && ok; ++t) {
      const Polynomial r = s.polynomial(spec.m, 1, 2), r2 = s.polynomial(spec.m, 1, 2);
      ok = unit_1(spec, r * r2, q) ==
               jet_mul(spec, unit_1(spec, r, q), unit_1(spec, r2, q)) &&
           unit_2(spec, r * r2, q) ==
               jet_mul(spec, unit_2(spec, r, q), unit_2(spec, r2, q));
    }
    rep.add("unit-multiplicative", ok, q);
  }
  {  // pairings against the identity element and xi_0
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q);
      const UElement dd = sample_u(s, spec, q - 1, 2);
      ok = pairing(spec, a, u_one(spec), 1) == jet_counit(a) &&
           pairing(spec, a, u_one(spec), 2) == jet_counit(a) &&
           pairing(spec, jet_basis(spec, zero, q), dd, 1) == u_counit(spec, dd) &&
           pairing(spec, jet_basis(spec, zero, q), dd, 2) == u_counit(spec, dd);
    }
    rep.add("pairing-unit-normalization", ok, q);
  }
  {  // module behavior: <1_2(r)a, D>_1 = r <a, D>_1 and <a, D r>_i = <1_i(r) a, D>_i
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Polynomial r = s.polynomial(spec.m, 1, 2);
      const Jet a = sample_jet(s, spec, q);
      const UElement dd = u_mono(spec, s.index(spec.d, q - 1));
      const UElement ddr = u_mul(spec, dd, r);
      const Jet a2 = jet_mul(spec, unit_2(spec, r, q), a);
      const Jet a1 = r * a;
      ok = pairing(spec, a2, dd, 1) == r * pairing(spec, a, dd, 1) &&
           pairing(spec, a, ddr, 1) == pairing(spec, a1, dd, 1) &&
           pairing(spec, a, ddr, 2) == pairing(spec, a2, dd, 2);
    }
    rep.add("pairing-module-rules", ok, q);
  }

  // Coproduct identities, checked per dual basis element.
  std::vector<std::string> fails(n);
  detail::parallel_for(n, jobs, [&](size_t mi) {
    const MultiIndex& m = gd.basis[mi];
    const auto& cells = gd.delta[mi];
    std::string msg;
    {  // (eps x id) Delta = id
      Jet lhs(spec.d, spec.m, q);
      for (const auto& [ab, c] : cells)
        if (gd.basis[ab.first] == zero)
          lhs += c * jet_basis(spec, gd.basis[ab.second], q);
      if (!(lhs == jet_basis(spec, m, q))) msg += "counit-left;";
    }
    {  // (id x eps) Delta = id via the second unit
      Jet lhs(spec.d, spec.m, q);
      for (const auto& [ab, c] : cells)
        if (gd.basis[ab.second] == zero)
          lhs += jet_mul(spec, jet_basis(spec, gd.basis[ab.first], q),
                         unit_2(spec, c, q));
      if (!(lhs == jet_basis(spec, m, q))) msg += "counit-right;";
    }
    {  // nabla1 reconstruction from the coproduct
      for (const auto& b : gd.basis) {
        if (degree(b) == 0 || degree(b) >= q) continue;
        const int oo = q - degree(b);
        Jet rhs(spec.d, spec.m, oo);
        for (const auto& [ab, c] : cells) {
          if (degree(gd.basis[ab.second]) >= oo) continue;
          const Polynomial w =
              gd.g1->mat.at(gd.pos(b), ab.first) * c;
          if (!w.is_zero())
            rhs += w * jet_basis(spec, gd.basis[ab.second], oo);
        }
        const Jet lhs = nabla1(spec, u_mono(spec, b), jet_basis(spec, m, q));
        if (!(lhs == rhs)) {
          msg += "nabla1-reconstruction;";
          break;
        }
      }
    }
    {  // nabla2 reconstruction
      for (const auto& g : gd.basis) {
        if (degree(g) == 0 || degree(g) >= q) continue;
        const int oo = q - degree(g);
        const size_t gi = gd.pos(g);
        Jet rhs(spec.d, spec.m, oo);
        for (const auto& [ab, c] : cells) {
          if (ab.second != gi) continue;
          if (degree(gd.basis[ab.first]) >= oo) continue;
          rhs += jet_mul(spec, jet_basis(spec, gd.basis[ab.first], oo),
                         unit_2(spec, c, oo));
        }
        const Jet lhs = nabla2(spec, u_mono(spec, g), jet_basis(spec, m, q));
        if (!(lhs == rhs)) {
          msg += "nabla2-reconstruction;";
          break;
        }
      }
    }
    {  // evaluation oracle over the whole window
      for (const auto& b : gd.basis) {
        for (const auto& g : gd.basis) {
          if (degree(b) + degree(g) >= q) continue;
          if (!coproduct_evaluation_check(gd, m, b, g)) {
            msg += "coproduct-evaluation;";
            break;
          }
        }
        if (!msg.empty() && msg.find("coproduct-evaluation") != std::string::npos)
          break;
      }
    }
    {  // coassociativity in canonical arity-3 coordinates
      std::vector<std::array<Jet, 3>> left, right;
      for (const auto& [ab, c] : cells) {
        const auto& inner = gd.delta[ab.first];
        for (const auto& [uv, c2] : inner)
          left.push_back({jet_basis(spec, gd.basis[uv.first], q),
                          c2 * jet_basis(spec, gd.basis[uv.second], q),
                          c * jet_basis(spec, gd.basis[ab.second], q)});
        const auto& inner2 = gd.delta[ab.second];
        for (const auto& [uv, c2] : inner2)
          right.push_back({jet_basis(spec, gd.basis[ab.first], q),
                           c * jet_basis(spec, gd.basis[uv.first], q),
                           c2 * jet_basis(spec, gd.basis[uv.second], q)});
      }
      if (canonicalize3(spec, left, q) != canonicalize3(spec, right, q))
        msg += "coassociativity;";
    }
    {  // antipode laws on the dual basis
      Jet law1(spec.d, spec.m, q);
      Jet law2(spec.d, spec.m, q);
      for (const auto& [ab, c] : cells) {
        law1 += c * jet_mul(spec, gd.antipode_plain[ab.first],
                            jet_basis(spec, gd.basis[ab.second], q));
        law2 += jet_mul(
            spec, jet_basis(spec, gd.basis[ab.first], q),
            jet_mul(spec, unit_2(spec, c, q), gd.antipode_plain[ab.second]));
      }
      const Polynomial em = m == zero ? Polynomial::constant(spec.m, 1)
                                      : Polynomial(spec.m);
      if (!(law1 == unit_2(spec, em, q))) msg += "antipode-law-left;";
      if (!(law2 == unit_1(spec, em, q))) msg += "antipode-law-right;";
    }
    fails[mi] = msg;
  });
  auto collect = [&](const std::string& tag) {
    std::string witness;
    for (size_t mi = 0; mi < n; ++mi)
      if (fails[mi].find(tag) != std::string::npos) {
        if (!witness.empty()) witness += ", ";
        witness += "xi" + std::to_string(mi);
      }
    return witness;
  };
  for (const std::string tag :
       {"counit-left", "counit-right", "nabla1-reconstruction",
        "nabla2-reconstruction", "coproduct-evaluation", "coassociativity",
        "antipode-law-left", "antipode-law-right"}) {
    const std::string witness = collect(tag);
    rep.add(tag, witness.empty(), q,
            witness.empty() ? "" : "failing dual indices: " + witness);
  }

  {  // coproduct is an algebra morphism (canonical coordinates)
    bool ok = true;
    for (int t = 0; t < 2 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 2);
      const Jet b = sample_jet(s, spec, q, 2);
      const CellMap lhs = groupoid_coproduct(gd, jet_mul(spec, a, b));
      const CellMap da = groupoid_coproduct(gd, a);
      const CellMap db = groupoid_coproduct(gd, b);
      std::vector<std::pair<Jet, Jet>> raw;
      for (const auto& [t1, c1] : da)
        for (const auto& [t2, c2] : db)
          raw.emplace_back(
              jet_mul(spec, jet_basis(spec, t1[0], q), jet_basis(spec, t2[0], q)),
              jet_mul(spec, c1 * jet_basis(spec, t1[1], q),
                      c2 * jet_basis(spec, t2[1], q)));
      ok = lhs == canonicalize2(spec, raw, q);
    }
    rep.add("coproduct-multiplicative", ok, q);
  }
  {  // coproduct of the two units
    const Polynomial r = s.polynomial(spec.m, 2, 2);
    CellMap want1;
    {
      std::vector<std::pair<Jet, Jet>> raw;
      raw.emplace_back(unit_1(spec, r, q), jet_basis(spec, zero, q));
      want1 = canonicalize2(spec, raw, q);
    }
    CellMap want2;
    {  // Delta(1_2(r)) = xi_0 x 1_2(r), then brought to canonical coordinates
      std::vector<std::pair<Jet, Jet>> raw;
      raw.emplace_back(jet_basis(spec, zero, q), unit_2(spec, r, q));
      want2 = canonicalize2(spec, raw, q);
    }
    const bool ok1 = groupoid_coproduct(gd, unit_1(spec, r, q)) == want1;
    const bool ok2 = groupoid_coproduct(gd, unit_2(spec, r, q)) == want2;
    rep.add("coproduct-units", ok1 && ok2, q);
  }
  {  // split pairing against the enveloping coproduct
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 2);
      const UElement dd = u_mono(spec, s.index(spec.d, q - 1));
      const CellMap da = groupoid_coproduct(gd, a);
      const UTensor dd2 = u_coproduct(spec, dd);
      Polynomial lhs(spec.m);
      for (const auto& [k, gcoef] : dd2.terms()) {
        for (const auto& [cell, c] : da) {
          if (cell[1] != k[1]) continue;
          const Polynomial p1 =
              pairing(spec, jet_basis(spec, cell[0], q), u_mono(spec, k[0]), 1);
          lhs += gcoef * p1 * c;
        }
      }
      ok = lhs == u_act(spec, dd, jet_counit(a));
    }
    rep.add("split-pairing-evaluation", ok, q);
  }
  {  // antipode exchanges the pairings and the units
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 2);
      const UElement dd = u_mono(spec, s.index(spec.d, q - 1));
      ok = pairing(spec, antipode(gd, a), dd, 1) == pairing(spec, a, dd, 2);
    }
    const Polynomial r = s.polynomial(spec.m, 2, 2);
    ok = ok && antipode(gd, unit_1(spec, r, q)) == unit_2(spec, r, q) &&
         antipode(gd, unit_2(spec, r, q)) == unit_1(spec, r, q);
    rep.add("antipode-pairing-swap", ok, q);
  }
  {  // antipode respects products and the counit
    bool ok = true;
    for (int t = 0; t < 2 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 2);
      const Jet b = sample_jet(s, spec, q, 2);
      ok = antipode(gd, jet_mul(spec, a, b)) ==
               jet_mul(spec, antipode(gd, a), antipode(gd, b)) &&
           jet_counit(antipode(gd, a)) == jet_counit(a);
    }
    rep.add("antipode-multiplicative", ok, q);
  }
  {  // the antipode squares to the identity
    bool ok = true;
    for (size_t ai = 0; ai < n && ok; ++ai)
      ok = antipode(gd, gd.antipode_plain[ai]) ==
           jet_basis(spec, gd.basis[ai], q);
    for (int t = 0; t < 2 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 2);
      ok = antipode(gd, antipode(gd, a)) == a;
    }
    rep.add("antipode-involution", ok, q);
  }
  return rep;
}

// Diagonal model for the rank-1 tangent structure: jets are truncated
// functions of (y, x) = (basepoint, displacement), the second unit is Taylor
// expansion r(y + x), the coproduct of a first-unit coefficient is Taylor
// expansion at y - x, and the jet product is plain truncated multiplication.
inline Report diagonal_model_report(int q, std::uint64_t seed = kDefaultSeed) {
  const AlgebroidSpec spec = tangent_spec(1);
  Report rep;
  rep.subject = "diagonal-model(tangent1, q=" + std::to_string(q) + ")";
  rep.seed = seed;
  Sampler s(seed);
  const GroupoidData gd = build_groupoid(spec, q);

  {  // dual basis <-> divided powers x^a / a!
    bool ok = true;
    for (int a = 0; a < q && ok; ++a) {
      Polynomial want(2);
      want.add_term({0, a}, Rational(1) / index_factorial({a}));
      ok = local_coordinates(spec, jet_basis(spec, {a}, q)) == want;
    }
    rep.add("divided-power-basis", ok, q);
  }
  {  // jet product = truncated polynomial product
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 3);
      const Jet b = sample_jet(s, spec, q, 3);
      const Polynomial prod = local_truncate(
          spec, local_coordinates(spec, a) * local_coordinates(spec, b), q);
      ok = local_coordinates(spec, jet_mul(spec, a, b)) == prod;
    }
    rep.add("product-is-truncated-multiplication", ok, q);
  }
  {  // second unit is Taylor expansion at y + x
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Polynomial r = s.polynomial(1, 3, 3);
      Polynomial taylor(2);
      Polynomial der = r;
      for (int k = 0; k < q; ++k) {
        for (const auto& [ym, c] : der.terms()) {
          MultiIndex full = ym;
          full.push_back(k);
          taylor.add_term(full, c / index_factorial({k}));
        }
        der = der.derivative(0);
      }
      ok = local_coordinates(spec, unit_2(spec, r, q)) == taylor;
    }
    rep.add("second-unit-taylor", ok, q);
  }
  {  // first-unit coefficients spread as Taylor expansion at y - x
    bool ok = true;
    for (int t = 0; t < 2 && ok; ++t) {
      const Polynomial r = s.polynomial(1, 3, 3);
      const CellMap cells = groupoid_coproduct(gd, unit_1(spec, r, q));
      Polynomial der = r;
      for (int w = 0; w < q && ok; ++w) {
        // The cell on xi_w x xi_0 is (-1)^w r^(w) with no factorial: the
        // divided power is already part of the dual basis element.
        const Polynomial want = (w % 2 == 0 ? Rational(1) : Rational(-1)) * der;
        Polynomial got(1);
        auto it = cells.find({{w}, {0}});
        if (it != cells.end()) got = it->second;
        ok = ok && got == want;
        der = der.derivative(0);
      }
      // all other cells must vanish
      for (const auto& [cell, c] : cells)
        if (!(cell[1] == MultiIndex{0})) ok = false;
    }
    rep.add("first-unit-reverse-taylor", ok, q);
  }
  {  // antipode is the displacement flip x -> -x
    bool ok = true;
    for (int t = 0; t < 2 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 3, 0);  // constant coefficients
      Polynomial flipped(2);
      const Polynomial local = local_coordinates(spec, a);
      for (const auto& [full, c] : local.terms())
        flipped.add_term(full, full[1] % 2 == 0 ? c : -c);
      ok = local_coordinates(spec, antipode(gd, a)) == flipped;
    }
    rep.add("antipode-flips-displacement", ok, q);
  }
  return rep;
}

}  // namespace liejets
