#pragma once
// Bundled verification suites.
//
// Each function sweeps exact identities over deterministic bases plus seeded
// random samples and returns a Report: one named pass/fail check per
// identity, with the certified truncation order and a witness on failure.
//
//   * connections_report  -- the two flat module structures on jets: ring
//     coefficients act without order loss, composition law, commutation of
//     the two structures, the Leibniz rules (frame sections and the general
//     coproduct form), and the symbol law on the top graded piece.
//   * complexes_report    -- the chain/cochain complex layer: differentials
//     square to zero (cochain, reduced, unreduced, bar), bar homotopy
//     contraction, cup derivation law and associativity, cap module laws,
//     cup/cap interchange, collapse-map compatibility, and the pairing
//     matrices in low degree.

#include <cstdint>
#include <string>
#include <vector>

#include "liejets/complexes.hpp"
#include "liejets/report.hpp"

namespace liejets {

namespace detail {

inline Cochain sample_cochain(Sampler& s, const AlgebroidSpec& spec, int arity,
                              int maxdeg, bool poly_coeff) {
  const std::vector<IndexTuple> ops = index_tuples(spec.d, maxdeg, arity);
  Cochain c = cochain_zero(spec, arity);
  for (int t = 0; t < 2; ++t) {
    const IndexTuple& key = ops[static_cast<std::size_t>(
        s.range(0, static_cast<int>(ops.size()) - 1))];
    c.tensor.add_term(key, poly_coeff
                               ? s.polynomial(spec.m, 1, 2)
                               : Polynomial::constant(spec.m, s.rational()));
  }
  return c;
}

inline std::string tuple_label(const IndexTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += "|";
    for (std::size_t k = 0; k < t[i].size(); ++k) {
      if (k) s += ",";
      s += std::to_string(t[i][k]);
    }
  }
  return s + ")";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Connection calculus suite.
// ---------------------------------------------------------------------------

inline Report connections_report(const AlgebroidSpec& spec, int q,
                                 std::uint64_t seed = kDefaultSeed) {
  spec.validate();
  if (q < 2) throw SpecError("connections_report: order must be >= 2");

  Report rep;
  rep.subject = "connections(" + spec.name + ", q=" + std::to_string(q) + ")";
  rep.seed = seed;
  Sampler s(seed);

  {  // Ring coefficients: first structure multiplies, second twists.
    bool ok = true;
    std::string witness;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q, 3, 2);
      const Polynomial r = s.polynomial(spec.m, 2, 2);
      if (!(nabla1(spec, u_scalar(spec, r), a) == r * a)) {
        ok = false;
        witness = "first structure, trial " + std::to_string(t);
      } else if (!(nabla2(spec, u_scalar(spec, r), a) ==
                   jet_mul(spec, unit_2(spec, r, q), a))) {
        ok = false;
        witness = "second structure, trial " + std::to_string(t);
      }
    }
    rep.add("ring coefficients act without order loss", ok, q, witness);
  }

  {  // Unit jet is a flat section of both structures.
    bool ok = true;
    std::string witness;
    const Jet one = jet_basis(spec, MultiIndex(static_cast<size_t>(spec.d), 0), q);
    for (int i = 0; i < spec.d && ok; ++i) {
      if (!(nabla1(spec, u_gen(spec, i), one) == jet_zero(spec, q - 1)) ||
          !(nabla2(spec, u_gen(spec, i), one) == jet_zero(spec, q - 1))) {
        ok = false;
        witness = "generator " + std::to_string(i + 1);
      }
    }
    rep.add("unit jet is flat for both structures", ok, q, witness);
  }

  {  // Composition law: the action of a product is the composed action.
    bool ok = true;
    std::string witness;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q + 1, 3, 1);
      const MultiIndex x = s.index(spec.d, 2), y = s.index(spec.d, 2);
      const UElement dx = u_mono(spec, x), dy = u_mono(spec, y);
      const UElement dxy = u_mul(spec, dx, dy);
      if (!(nabla1(spec, dxy, a) == nabla1(spec, dx, nabla1(spec, dy, a))) ||
          !(nabla2(spec, dxy, a) == nabla2(spec, dx, nabla2(spec, dy, a)))) {
        ok = false;
        witness = "trial " + std::to_string(t);
      }
    }
    rep.add("module composition law for both structures", ok, q, witness);
  }

  {  // The two flat structures commute.
    bool ok = true;
    std::string witness;
    for (int t = 0; t < 3 && ok; ++t) {
      const Jet a = sample_jet(s, spec, q + 1, 3, 1);
      const MultiIndex x = s.index(spec.d, 2), y = s.index(spec.d, 2);
      const UElement dx = u_mono(spec, x), dy = u_mono(spec, y);
      if (!(nabla1(spec, dx, nabla2(spec, dy, a)) ==
            nabla2(spec, dy, nabla1(spec, dx, a)))) {
        ok = false;
        witness = "trial " + std::to_string(t);
      }
    }
    rep.add("the two flat structures commute", ok, q, witness);
  }

  {  // Frame sections are derivations of the jet product.
    bool ok = true;
    std::string witness;
    for (int t = 0; t < 2 && ok; ++t) {
      const Jet x = sample_jet(s, spec, q, 2, 1);
      const Jet y = sample_jet(s, spec, q, 2, 1);
      const Jet xy = jet_mul(spec, x, y);
      for (int i = 0; i < spec.d && ok; ++i) {
        const UElement l = u_gen(spec, i);
        for (int which = 1; which <= 2 && ok; ++which) {
          auto apply = [&](const Jet& j) {
            return which == 1 ? nabla1(spec, l, j) : nabla2(spec, l, j);
          };
          const Jet lhs = apply(xy);
          const Jet rhs = jet_mul(spec, apply(x), jet_common(y, q - 1)) +
                          jet_mul(spec, jet_common(x, q - 1), apply(y));
          if (!(lhs == rhs)) {
            ok = false;
            witness = "generator " + std::to_string(i + 1) + ", structure " +
                      std::to_string(which);
          }
        }
      }
    }
    rep.add("frame sections act as derivations of the jet product", ok, q,
            witness);
  }

  {  // General Leibniz rule through the coproduct, both structures.
    bool ok = true;
    std::string witness;
    for (int t = 0; t < 2 && ok; ++t) {
      const Jet x = sample_jet(s, spec, q, 2, 1);
      const Jet y = sample_jet(s, spec, q, 2, 1);
      for (const MultiIndex& b : indices_up_to(spec.d, 2)) {
        if (is_zero_index(b)) continue;
        const int oo = q - degree(b);
        const UTensor delta = detail::coproduct_mono(spec, b);
        for (int which = 1; which <= 2 && ok; ++which) {
          auto apply = [&](const UElement& dd, const Jet& j) {
            return which == 1 ? nabla1(spec, dd, j) : nabla2(spec, dd, j);
          };
          const Jet lhs = apply(u_mono(spec, b), jet_mul(spec, x, y));
          Jet rhs(spec.d, spec.m, oo);
          const auto& cells = delta.terms();
          for (const auto& [k, f] : cells) {
            const Jet lx = jet_common(apply(u_mono(spec, k[0]), x), oo);
            const Jet ly = jet_common(apply(u_mono(spec, k[1]), y), oo);
            rhs += f * jet_mul(spec, lx, ly);
          }
          if (!(lhs == rhs)) {
            ok = false;
            witness = "monomial of degree " + std::to_string(degree(b)) +
                      ", structure " + std::to_string(which);
          }
        }
        if (!ok) break;
      }
    }
    rep.add("Leibniz rule through the coproduct for both structures", ok, q,
            witness);
  }

  {  // Symbol law: acting by a frame generator on a dual basis element kills
     // everything below degree |a|-1, and the degree-(|a|-1) part is the
     // index contraction with sign -1 (first structure) / +1 (second).
    bool ok = true;
    std::string witness;
    const int topdeg = std::min(q - 1, 3);
    for (int adeg = 1; adeg <= topdeg && ok; ++adeg)
      for (const MultiIndex& a : indices_up_to(spec.d, adeg)) {
        if (degree(a) != adeg) continue;
        for (int i = 0; i < spec.d && ok; ++i)
          for (int which = 1; which <= 2 && ok; ++which) {
            const Jet moved = which == 1
                                  ? nabla1(spec, u_gen(spec, i),
                                           jet_basis(spec, a, q))
                                  : nabla2(spec, u_gen(spec, i),
                                           jet_basis(spec, a, q));
            for (const MultiIndex& b : indices_up_to(spec.d, adeg - 1)) {
              Polynomial want(spec.m);
              if (degree(b) == adeg - 1 && a[static_cast<size_t>(i)] >= 1) {
                MultiIndex contracted = a;
                contracted[static_cast<size_t>(i)] -= 1;
                if (b == contracted)
                  want = Polynomial::constant(spec.m,
                                              which == 1 ? Rational(-1)
                                                         : Rational(1));
              }
              if (degree(b) < adeg - 1) want = Polynomial(spec.m);
              if (!(moved.coeff(b) == want)) {
                ok = false;
                witness = "index degree " + std::to_string(adeg) +
                          ", generator " + std::to_string(i + 1) +
                          ", structure " + std::to_string(which);
                break;
              }
            }
          }
        if (!ok) break;
      }
    rep.add("symbol law: top graded piece is the signed index contraction", ok,
            q, witness);
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Chain/cochain complex suite.
// ---------------------------------------------------------------------------

inline Report complexes_report(const AlgebroidSpec& spec, int q, int N, int P,
                               std::uint64_t seed = kDefaultSeed) {
  spec.validate();
  if (q < 3)
    throw SpecError(
        "complexes_report: order must be >= 3 so capped chains keep a "
        "certified window");
  if (N < 1 || P < 1)
    throw SpecError("complexes_report: sweep bounds must be >= 1");

  Report rep;
  rep.subject = "complexes(" + spec.name + ", q=" + std::to_string(q) +
                ", N=" + std::to_string(N) + ", P=" + std::to_string(P) + ")";
  rep.seed = seed;
  Sampler s(seed);

  const int maxp = std::min(P, 3);

  {  // Cochain differential squares to zero on the full window basis.
    bool ok = true;
    std::string witness;
    for (int p = 1; p <= maxp && ok; ++p) {
      for (const IndexTuple& t : index_tuples(spec.d, N, p)) {
        int total = 0;
        for (const MultiIndex& a : t) total += degree(a);
        if (total > N) continue;
        UTensor u(spec.d, spec.m, p);
        u.add_term(t, Polynomial::constant(spec.m, Rational(1)));
        if (!dH(spec, dH(spec, cochain_from_tensor(spec, u))).is_zero()) {
          ok = false;
          witness = "arity " + std::to_string(p) + " basis " +
                    detail::tuple_label(t);
          break;
        }
      }
      // Polynomial coefficients ride along linearly; sample a few.
      for (int t = 0; t < 2 && ok; ++t) {
        const Cochain c = detail::sample_cochain(s, spec, p, N, true);
        if (!dH(spec, dH(spec, c)).is_zero()) {
          ok = false;
          witness = "sampled arity " + std::to_string(p);
        }
      }
    }
    rep.add("cochain differential squares to zero (window sweep)", ok, N,
            witness);
  }

  {  // Cup derivation law with the degree sign, sampled.
    bool ok = true;
    std::string witness;
    const std::vector<std::pair<int, int>> arities = {{1, 1}, {1, 2}, {2, 1}};
    for (const auto& [pa, pb] : arities) {
      for (int t = 0; t < 2 && ok; ++t) {
        const Cochain a = detail::sample_cochain(s, spec, pa, 2, true);
        const Cochain b = detail::sample_cochain(s, spec, pb, 2, false);
        const Cochain lhs = dH(spec, cup(spec, a, b));
        const Cochain da_b = cup(spec, dH(spec, a), b);
        const Cochain a_db = cup(spec, a, dH(spec, b));
        const Cochain rhs = (pa % 2 == 0) ? da_b + a_db : da_b - a_db;
        if (!(lhs == rhs)) {
          ok = false;
          witness = "arities (" + std::to_string(pa) + "," +
                    std::to_string(pb) + ")";
        }
      }
      if (!ok) break;
    }
    rep.add("cochain differential is a graded derivation for cup", ok, N,
            witness);
  }

  {  // Cup associativity, sampled.
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      const Cochain a = detail::sample_cochain(s, spec, 1, 2, true);
      const Cochain b = detail::sample_cochain(s, spec, 1, 2, false);
      const Cochain c = detail::sample_cochain(s, spec, 1, 2, true);
      ok = cup(spec, cup(spec, a, b), c) == cup(spec, a, cup(spec, b, c));
    }
    rep.add("cup product is associative", ok, N);
  }

  {  // Chain boundaries square to zero: reduced, unreduced, and bar.
    bool red_ok = true, unred_ok = true, bar_ok = true;
    std::string red_w, unred_w, bar_w;
    for (int p = 2; p <= maxp && (red_ok || unred_ok || bar_ok); ++p)
      for (const IndexTuple& t : index_tuples(spec.d, q - 1, p)) {
        JetTensor x = jt_zero(spec, static_cast<std::size_t>(p), q);
        jt_add_cell(x, t, Polynomial::constant(spec.m, Rational(1)));
        if (red_ok &&
            !bH_reduced(spec, bH_reduced(spec, ChainReduced{x})).t.is_zero()) {
          red_ok = false;
          red_w = detail::tuple_label(t);
        }
        if (unred_ok && !bH_unreduced(spec, bH_unreduced(spec, ChainUnreduced{x}))
                             .t.is_zero()) {
          unred_ok = false;
          unred_w = detail::tuple_label(t);
        }
        if (bar_ok &&
            !bar_diff(spec, bar_diff(spec, BarElement{x})).t.is_zero()) {
          bar_ok = false;
          bar_w = detail::tuple_label(t);
        }
      }
    rep.add("reduced chain boundary squares to zero (full tuple sweep)", red_ok,
            q, red_w);
    rep.add("unreduced chain boundary squares to zero (full tuple sweep)",
            unred_ok, q, unred_w);
    rep.add("bar differential squares to zero (full tuple sweep)", bar_ok, q,
            bar_w);
  }

  {  // Bar homotopy contracts the identity degreewise.
    bool ok = true;
    std::string witness;
    const BarElement f = bar_scalar(spec, s.polynomial(spec.m, 1, 2), q);
    if (!(bar_diff(spec, bar_homotopy(spec, f)).t == f.t)) {
      ok = false;
      witness = "augmentation piece";
    }
    for (int p = 1; p <= maxp && ok; ++p)
      for (const IndexTuple& t : index_tuples(spec.d, q - 1, p)) {
        BarElement b{jt_zero(spec, static_cast<std::size_t>(p), q)};
        jt_add_cell(b.t, t, Polynomial::constant(spec.m, Rational(1)));
        const JetTensor lhs = bar_diff(spec, bar_homotopy(spec, b)).t +
                              bar_homotopy(spec, bar_diff(spec, b)).t;
        if (!(lhs == b.t)) {
          ok = false;
          witness = "arity " + std::to_string(p) + " basis " +
                    detail::tuple_label(t);
          break;
        }
      }
    rep.add("bar homotopy contracts the identity degreewise", ok, q, witness);
  }

  {  // Unit-slot collapse intertwines the bar and reduced boundaries.
    bool ok = true;
    std::string witness;
    const Polynomial f = s.polynomial(spec.m, 1, 2);
    for (int p = 2; p <= maxp && ok; ++p)
      for (const IndexTuple& t : index_tuples(spec.d, q - 1, p)) {
        BarElement b{jt_zero(spec, static_cast<std::size_t>(p), q)};
        jt_add_cell(b.t, t, Polynomial::constant(spec.m, Rational(1)));
        if (!(psi_map(spec, f, bar_diff(spec, b)).t ==
              bH_reduced(spec, psi_map(spec, f, b)).t)) {
          ok = false;
          witness = detail::tuple_label(t);
          break;
        }
      }
    rep.add("unit-slot collapse intertwines bar and reduced boundaries", ok, q,
            witness);
  }

  {  // Cap is a module action compatible with the boundary (Leibniz form).
    bool ok = true;
    std::string witness;
    const Cochain D = detail::sample_cochain(s, spec, 1, 1, true);
    const int drop = cochain_filtration(D);
    for (const IndexTuple& t : index_tuples(spec.d, std::min(2, q - 1), 3)) {
      ChainUnreduced x{jt_zero(spec, 3, q)};
      jt_add_cell(x.t, t, s.polynomial(spec.m, 1, 1));
      const JetTensor lhs = bH_unreduced(spec, cap_unreduced(spec, D, x)).t;
      const JetTensor a =
          jt_truncated(cap_unreduced(spec, dH(spec, D), x).t, q - drop);
      const JetTensor b = cap_unreduced(spec, D, bH_unreduced(spec, x)).t;
      const JetTensor rhs = a - b;
      if (!jt_equal_at_order(lhs, rhs, q - drop)) {
        ok = false;
        witness = detail::tuple_label(t);
        break;
      }
    }
    rep.add("cap satisfies the boundary Leibniz rule", ok, q, witness);
  }

  {  // Cup/cap interchange with the sign of the interchange law, both cap
     // flavors.
    bool ok = true;
    std::string witness;
    const Cochain D = detail::sample_cochain(s, spec, 1, 1, false);
    const Cochain E = detail::sample_cochain(s, spec, 1, 1, false);
    for (const IndexTuple& t : index_tuples(spec.d, std::min(3, q - 1), 3)) {
      ChainReduced c{jt_zero(spec, 3, q)};
      jt_add_cell(c.t, t, Polynomial::constant(spec.m, Rational(1)));
      const JetTensor lhs = cap_reduced(spec, cup(spec, D, E), c).t;
      const JetTensor rhs =
          Rational(-1) * cap_reduced(spec, E, cap_reduced(spec, D, c)).t;
      if (!(lhs == rhs)) {
        ok = false;
        witness = "reduced " + detail::tuple_label(t);
        break;
      }
    }
    for (const IndexTuple& t : index_tuples(spec.d, std::min(2, q - 1), 3)) {
      if (!ok) break;
      ChainUnreduced c{jt_zero(spec, 3, q)};
      jt_add_cell(c.t, t, s.polynomial(spec.m, 1, 1));
      const JetTensor lhs = cap_unreduced(spec, cup(spec, D, E), c).t;
      const JetTensor rhs =
          Rational(-1) *
          cap_unreduced(spec, E, cap_unreduced(spec, D, c)).t;
      if (!(lhs == rhs)) {
        ok = false;
        witness = "unreduced " + detail::tuple_label(t);
      }
    }
    rep.add("cup and cap interchange with the module-action sign", ok, q,
            witness);
  }

  {  // Cap commutes with the unit-slot collapse.
    bool ok = true;
    std::string witness;
    const Cochain D = detail::sample_cochain(s, spec, 1, 1, true);
    const Polynomial f = s.polynomial(spec.m, 1, 2);
    const int drop = cochain_filtration(D);
    for (const IndexTuple& t : index_tuples(spec.d, std::min(2, q - 1), 2)) {
      BarElement u{jt_zero(spec, 2, q)};
      jt_add_cell(u.t, t, Polynomial::constant(spec.m, Rational(1)));
      const JetTensor lhs = jt_truncated(
          cap_reduced(spec, D, psi_map(spec, f, u)).t, q - drop);
      const JetTensor rhs = psi_map(spec, f, cap_bar(spec, D, u)).t;
      if (!(lhs == rhs)) {
        ok = false;
        witness = detail::tuple_label(t);
        break;
      }
    }
    rep.add("cap commutes with the unit-slot collapse", ok, q, witness);
  }

  {  // Pairing component matrices in low degree are the identity, hence
     // invertible with unit determinant.
    bool ok = true;
    std::string witness;
    for (int k = 2; k <= q && ok; ++k)
      for (int p = 0; p <= 2 && ok; ++p) {
        const Matrix<Polynomial> mat = phi_component(spec, k, p);
        if (!(mat == poly_identity(mat.rows(), spec.m))) {
          ok = false;
          witness = "order " + std::to_string(k) + ", arity " +
                    std::to_string(p);
        }
      }
    rep.add("pairing component matrices are the identity in low arity", ok, q,
            witness);
  }

  {  // The slot-wise flat action commutes with capping.
    bool ok = true;
    std::string witness;
    const UElement l = u_gen(spec, 0);
    const Cochain D = detail::sample_cochain(s, spec, 1, 1, true);
    for (const IndexTuple& t : index_tuples(spec.d, std::min(2, q - 2), 2)) {
      ChainUnreduced x{jt_zero(spec, 2, q)};
      jt_add_cell(x.t, t, s.polynomial(spec.m, 1, 1));
      const JetTensor lhs =
          gnabla_tensor(spec, l, cap_unreduced(spec, D, x).t);
      const JetTensor rhs =
          cap_unreduced(spec, D, ChainUnreduced{gnabla_tensor(spec, l, x.t)})
              .t;
      if (!(lhs == rhs)) {
        ok = false;
        witness = detail::tuple_label(t);
        break;
      }
    }
    rep.add("slot-wise flat action is equivariant for cap", ok, q, witness);
  }

  return rep;
}

}  // namespace liejets
