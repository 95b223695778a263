#pragma once
// Homology engine.
//
// Everything here works with assembled GradedComplex values (see
// complexes.hpp).  Rank computations are done only after the complex has
// been evaluated at a rational base point, so every homology dimension is
// the exact rank-nullity count of a matrix over the rationals -- no Groebner
// bases, no floating point.  The window complexes truncate the chain and
// cochain theories to finite pieces that are honest subquotient complexes:
//
//   * cochain window: operator tuples of total degree <= N.  The cochain
//     differential never raises total degree, so these tuples span a
//     subcomplex and the low cohomology stabilises once N is large enough.
//   * chain window: reduced chains on the order-q jet algebra, i.e. tuples
//     over the augmentation ideal basis.  Degree-k homology of the window is
//     the degree-k homology of the truncated theory; degrees where the
//     truncation provably suffices are cross-checked against the coordinate
//     (Koszul-type) fiber complex, degrees beyond are labeled
//     "window-limited" and never reported as ground truth.
//
// hh_report bundles the homology counts with the verification suites of the
// underlying structure (groupoid axioms, differential identities) into one
// machine-checkable Report.

#include <cstdint>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "liejets/complexes.hpp"
#include "liejets/groupoid.hpp"
#include "liejets/report.hpp"

namespace liejets {

// ---------------------------------------------------------------------------
// HomologyTable: homological degree -> exact dimension.
// ---------------------------------------------------------------------------

struct HomologyTable {
  std::map<int, int> dims;

  int at(int degree) const {
    auto it = dims.find(degree);
    return it == dims.end() ? 0 : it->second;
  }

  bool operator==(const HomologyTable& o) const { return dims == o.dims; }
  bool operator!=(const HomologyTable& o) const { return !(*this == o); }
};

inline nlohmann::json homology_table_to_json(const HomologyTable& t) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& [n, v] : t.dims)
    dims.push_back(nlohmann::json{{"degree", n}, {"dim", v}});
  return nlohmann::json{{"schema", "liejets-homology/1"}, {"dims", dims}};
}

inline std::string homology_table_to_string(const HomologyTable& t) {
  std::string out = "{";
  bool first = true;
  for (const auto& [n, v] : t.dims) {
    if (!first) out += ", ";
    first = false;
    out += "H" + std::to_string(n) + "=" + std::to_string(v);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Evaluation at a rational base point.
//
// Substitutes the point into every differential entry.  The result is a
// complex of constant matrices (entries are 0-variable polynomials), ready
// for exact rank computations.  Ranks, direction, and labels carry over.
// ---------------------------------------------------------------------------

inline GradedComplex evaluate_at_point(const GradedComplex& g,
                                       const std::vector<Rational>& point) {
  std::map<int, Matrix<Polynomial>> diffs;
  for (const auto& [n, mat] : g.differentials) {
    Matrix<Polynomial> out(mat.rows(), mat.cols(), Polynomial(0));
    for (std::size_t r = 0; r < mat.rows(); ++r)
      for (std::size_t c = 0; c < mat.cols(); ++c) {
        Rational v = poly_eval_at(mat.at(r, c), point);
        if (!(v == 0)) out.at(r, c) = Polynomial::constant(0, v);
      }
    diffs.emplace(n, std::move(out));
  }
  GradedComplex out =
      make_graded_complex(g.name + "@point", g.direction, g.ranks, diffs);
  out.labels = g.labels;
  return out;
}

namespace detail {

// Extract a rational matrix from a constant polynomial matrix.  Throws if
// any entry still depends on the base variables -- homology ranks are only
// defined after evaluation at a point.
inline Matrix<Rational> constant_matrix(const Matrix<Polynomial>& m,
                                        const std::string& context) {
  Matrix<Rational> out(m.rows(), m.cols(), Rational(0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Polynomial& f = m.at(r, c);
      if (!f.is_constant())
        throw SpecError(context +
                        ": differential entries must be constant; evaluate "
                        "the complex at a base point first");
      out.at(r, c) = f.constant_term();
    }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// homology_ranks: exact dimension of homology in every degree that carries a
// (possibly zero) module, via rank-nullity over the rationals.
//
//   dim H_n = rank(C_n) - rank(d at n) - rank(d into n).
//
// Degrees at the edge of an assembled window are the caller's
// responsibility: a missing differential is treated as the zero map, which
// is correct precisely when the adjacent module genuinely vanishes (or when
// the caller only consumes interior degrees).
// ---------------------------------------------------------------------------

inline HomologyTable homology_ranks(const GradedComplex& g) {
  std::map<int, int> diff_rank;
  for (const auto& [n, mat] : g.differentials)
    diff_rank[n] =
        rational_rank(detail::constant_matrix(mat, "homology(" + g.name + ")"));

  HomologyTable table;
  long long euler_dims = 0;
  long long euler_ranks = 0;
  for (const auto& [n, r] : g.ranks) {
    auto out_it = diff_rank.find(n);
    int out_rank = out_it == diff_rank.end() ? 0 : out_it->second;
    auto in_it = diff_rank.find(n - g.direction);
    int in_rank = in_it == diff_rank.end() ? 0 : in_it->second;
    int dim = static_cast<int>(r) - out_rank - in_rank;
    if (dim < 0)
      throw SpecError("homology(" + g.name + "): negative dimension at degree " +
                      std::to_string(n) + " -- complex is inconsistent");
    table.dims[n] = dim;
    long long sign = (n % 2 == 0) ? 1 : -1;
    euler_dims += sign * dim;
    euler_ranks += sign * static_cast<long long>(r);
  }
  // Alternating sums agree because every differential's rank is counted
  // once with each sign; this is a cheap internal consistency assertion.
  if (euler_dims != euler_ranks) {
    // Only possible if a differential connects degrees outside `ranks`,
    // which make_graded_complex already rules out.
    throw SpecError("homology(" + g.name +
                    "): Euler characteristic mismatch between ranks and "
                    "homology dimensions");
  }
  return table;
}

// ---------------------------------------------------------------------------
// Cochain window complex.
//
// Degree p is spanned by the operator p-tuples (basis cochains) whose slot
// degrees sum to at most N; degree 0 is the rank-1 scalar piece.  The
// cochain differential never raises total degree (appending units keeps it,
// coproduct cells of a generator power have total degree at most the
// original), so the window is a subcomplex and the assembled matrices
// compose to zero exactly.
// ---------------------------------------------------------------------------

inline std::vector<IndexTuple> cochain_window_basis(const AlgebroidSpec& spec,
                                                    int total_degree_bound,
                                                    int p) {
  if (p < 0) throw SpecError("cochain_window_basis: negative arity");
  if (p == 0) return {IndexTuple{}};
  std::vector<IndexTuple> out;
  for (const IndexTuple& t : index_tuples(spec.d, total_degree_bound, p)) {
    int total = 0;
    for (const MultiIndex& a : t) total += degree(a);
    if (total <= total_degree_bound) out.push_back(t);
  }
  return out;
}

inline GradedComplex cochain_window_complex(const AlgebroidSpec& spec, int N,
                                            int top_degree = 3) {
  if (N < 1) throw SpecError("cochain_window_complex: window bound must be >= 1");
  if (top_degree < 1)
    throw SpecError("cochain_window_complex: top degree must be >= 1");

  std::map<int, std::vector<IndexTuple>> basis;
  std::map<int, std::size_t> ranks;
  ranks[0] = 1;
  for (int p = 1; p <= top_degree; ++p) {
    basis[p] = cochain_window_basis(spec, N, p);
    ranks[p] = basis[p].size();
  }

  std::map<int, Matrix<Polynomial>> diffs;
  // Scalars are closed: the degree-0 differential is the zero map.
  diffs.emplace(0, Matrix<Polynomial>(ranks[1], 1, Polynomial(spec.m)));

  for (int p = 1; p < top_degree; ++p) {
    std::map<IndexTuple, std::size_t, TupleLess> row_of;
    for (std::size_t i = 0; i < basis[p + 1].size(); ++i)
      row_of.emplace(basis[p + 1][i], i);

    Matrix<Polynomial> mat(ranks[p + 1], ranks[p], Polynomial(spec.m));
    for (std::size_t j = 0; j < basis[p].size(); ++j) {
      UTensor t(spec.d, spec.m, p);
      t.add_term(basis[p][j], Polynomial::constant(spec.m, Rational(1)));
      Cochain dc = dH(spec, cochain_from_tensor(spec, t));
      if (dc.is_zero()) continue;
      const auto& cells = dc.tensor.terms();
      for (const auto& [key, f] : cells) {
        auto it = row_of.find(key);
        if (it == row_of.end())
          throw SpecError(
              "cochain_window_complex: differential left the window, which "
              "contradicts the degree filtration");
        mat.at(it->second, j) += f;
      }
    }
    diffs.emplace(p, std::move(mat));
  }

  GradedComplex out = make_graded_complex(
      "cochain-window(" + spec.name + ",N=" + std::to_string(N) + ")", +1,
      ranks, diffs);
  std::vector<std::string> names0 = {"1"};
  out.labels[0] = names0;
  for (int p = 1; p <= top_degree; ++p) {
    std::vector<std::string> names;
    names.reserve(basis[p].size());
    for (const IndexTuple& t : basis[p]) {
      std::string s = "(";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += "|";
        for (std::size_t k = 0; k < t[i].size(); ++k) {
          if (k) s += ",";
          s += std::to_string(t[i][k]);
        }
      }
      names.push_back(s + ")");
    }
    out.labels[p] = std::move(names);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain window complex (reduced chains on the order-q jet algebra).
//
// Degree p is spanned by p-tuples over the augmentation-ideal basis of the
// truncated jet algebra (all nonzero jet indices of degree < q); degree 0 is
// the rank-1 scalar piece.  Differentials are the reduced chain boundary;
// the degree-1 boundary is the zero map because the head and tail terms of
// a single augmentation-ideal slot both involve the counit of a
// positive-degree element.
// ---------------------------------------------------------------------------

inline GradedComplex chain_window_complex(const AlgebroidSpec& spec, int q,
                                          int top_degree = 3) {
  if (q < 1) throw SpecError("chain_window_complex: order must be >= 1");
  if (top_degree < 1)
    throw SpecError("chain_window_complex: top degree must be >= 1");

  std::map<int, std::vector<IndexTuple>> basis;
  std::map<int, std::size_t> ranks;
  ranks[0] = 1;
  for (int p = 1; p <= top_degree; ++p) {
    std::vector<IndexTuple> all = index_tuples(spec.d, q - 1, p);
    std::vector<IndexTuple> reduced;
    reduced.reserve(all.size());
    for (const IndexTuple& t : all) {
      bool has_unit_slot = false;
      for (const MultiIndex& a : t)
        if (degree(a) == 0) {
          has_unit_slot = true;
          break;
        }
      if (!has_unit_slot) reduced.push_back(t);
    }
    basis[p] = std::move(reduced);
    ranks[p] = basis[p].size();
  }

  std::map<int, Matrix<Polynomial>> diffs;
  for (int p = 1; p <= top_degree; ++p) {
    std::map<IndexTuple, std::size_t, TupleLess> row_of;
    for (std::size_t i = 0; i < basis[p - 1].size(); ++i)
      row_of.emplace(basis[p - 1][i], i);

    Matrix<Polynomial> mat(ranks[p - 1], ranks[p], Polynomial(spec.m));
    for (std::size_t j = 0; j < basis[p].size(); ++j) {
      JetTensor t = jt_zero(spec, static_cast<std::size_t>(p), q);
      jt_add_cell(t, basis[p][j], Polynomial::constant(spec.m, Rational(1)));
      ChainReduced dx = bH_reduced(spec, ChainReduced{t});
      if (dx.t.is_zero()) continue;
      for (const auto& [key, f] : dx.t.cells) {
        auto it = row_of.find(key);
        if (it == row_of.end())
          throw SpecError(
              "chain_window_complex: boundary left the window, which "
              "contradicts the jet filtration");
        mat.at(it->second, j) += f;
      }
    }
    diffs.emplace(p, std::move(mat));
  }

  return make_graded_complex(
      "chain-window(" + spec.name + ",q=" + std::to_string(q) + ")", -1, ranks,
      diffs);
}

// ---------------------------------------------------------------------------
// hh_report: one bundled, machine-checkable verification report.
//
//   * cochain window cohomology in degrees 0..2 with the two exact oracles
//     (H^0 = scalars, H^1 = primitive operators = the frame) and an N -> N+1
//     stability probe for degree 2;
//   * chain homology of the reduced window cross-checked against the
//     coordinate fiber complex in degrees 0..1, with a q -> q+1 stability
//     probe; degree 2 is reported as window-limited information only;
//   * concentration of the dual coordinate complex in top degree (rank 1);
//     exactness of the primal coordinate resolution window;
//   * the full groupoid verification suite at order q, bundled check by
//     check.
// ---------------------------------------------------------------------------

inline Report hh_report(const AlgebroidSpec& spec, int q, int N, int P,
                        const std::vector<Rational>& point,
                        std::uint64_t seed = kDefaultSeed, int jobs = 1) {
  spec.validate();
  if (static_cast<int>(point.size()) != spec.m)
    throw SpecError("hh_report: base point has wrong dimension");
  if (q < 2) throw SpecError("hh_report: order must be >= 2");
  if (N < 1 || P < 1)
    throw SpecError("hh_report: window bounds must be >= 1");

  Report rep;
  rep.subject = "hh(" + spec.name + ", q=" + std::to_string(q) +
                ", N=" + std::to_string(N) + ", P=" + std::to_string(P) + ")";
  rep.seed = seed;

  // The window complexes are assembled up to a top degree whose outgoing
  // differential is not part of the window, so the top entry of each raw
  // table is an edge artifact; restrict every table to its interior degrees
  // before reporting.
  auto interior = [](HomologyTable t, int maxdeg) {
    for (auto it = t.dims.begin(); it != t.dims.end();)
      it = (it->first > maxdeg) ? t.dims.erase(it) : std::next(it);
    return t;
  };

  // ---- cochain side -------------------------------------------------------
  HomologyTable ct = interior(
      homology_ranks(
          evaluate_at_point(cochain_window_complex(spec, N, 3), point)),
      2);
  rep.add("cochain H0 = 1 (only scalars are closed in degree zero)",
          ct.at(0) == 1, N, "computed " + homology_table_to_string(ct));
  rep.add("cochain H1 = d (primitive operators are exactly the frame)",
          ct.at(1) == spec.d, N,
          "expected " + std::to_string(spec.d) + ", computed " +
              std::to_string(ct.at(1)));

  HomologyTable ct_next = interior(
      homology_ranks(
          evaluate_at_point(cochain_window_complex(spec, N + 1, 3), point)),
      2);
  bool c_stable01 = ct.at(0) == ct_next.at(0) && ct.at(1) == ct_next.at(1);
  rep.add("cochain H0,H1 stable under window growth N -> N+1", c_stable01,
          N + 1,
          homology_table_to_string(ct) + " vs " +
              homology_table_to_string(ct_next));
  {
    std::string label =
        ct.at(2) == ct_next.at(2)
            ? "H2 = " + std::to_string(ct.at(2)) + " (stable at N and N+1)"
            : "H2 window-limited: N gives " + std::to_string(ct.at(2)) +
                  ", N+1 gives " + std::to_string(ct_next.at(2));
    rep.add("cochain H2 report (informational, window-checked)", true, N,
            label);
  }

  // ---- chain side ---------------------------------------------------------
  HomologyTable fiber =
      homology_ranks(evaluate_at_point(koszul_fiber_complex(spec), point));
  HomologyTable bt = interior(
      homology_ranks(
          evaluate_at_point(chain_window_complex(spec, q, 3), point)),
      2);
  rep.add("chain H0: reduced window agrees with the coordinate fiber complex",
          bt.at(0) == fiber.at(0) && bt.at(0) == 1, q,
          "window " + homology_table_to_string(bt) + ", fiber " +
              homology_table_to_string(fiber));
  rep.add("chain H1: reduced window agrees with the coordinate fiber complex",
          bt.at(1) == fiber.at(1) && bt.at(1) == spec.d, q,
          "expected " + std::to_string(spec.d) + ", window computed " +
              std::to_string(bt.at(1)));

  HomologyTable bt_next = interior(
      homology_ranks(
          evaluate_at_point(chain_window_complex(spec, q + 1, 2), point)),
      1);
  bool b_stable01 = bt.at(0) == bt_next.at(0) && bt.at(1) == bt_next.at(1);
  rep.add("chain H0,H1 stable under window growth q -> q+1", b_stable01, q + 1,
          homology_table_to_string(bt) + " vs " +
              homology_table_to_string(bt_next));
  {
    std::string label =
        bt.at(2) == fiber.at(2)
            ? "H2 = " + std::to_string(bt.at(2)) +
                  " (matches the fiber complex at this window)"
            : "H2 window-limited: window gives " + std::to_string(bt.at(2)) +
                  ", fiber complex gives " + std::to_string(fiber.at(2)) +
                  " -- the truncated algebra is not regular, so degree 2 is "
                  "reported as information only";
    rep.add("chain H2 report (informational, window-checked)", true, q, label);
  }

  // ---- coordinate (Koszul-type) complexes ---------------------------------
  {
    const int bound = 4;
    HomologyTable primal = homology_ranks(
        evaluate_at_point(koszul_complex(spec, bound), point));
    bool exact = primal.at(0) == 1;
    for (const auto& [n, v] : primal.dims)
      if (n != 0 && v != 0) exact = false;
    rep.add("coordinate resolution window is exact above degree 0, rank 1 at 0",
            exact, bound, homology_table_to_string(primal));

    HomologyTable dual = homology_ranks(
        evaluate_at_point(koszul_dual_complex(spec, bound), point));
    bool conc = true;
    for (const auto& [n, v] : dual.dims) {
      int want = (n == spec.d) ? 1 : 0;
      if (v != want) conc = false;
    }
    rep.add("dual coordinate cohomology concentrated in top degree with rank 1",
            conc, bound, homology_table_to_string(dual));
  }

  // ---- bundled structure verification --------------------------------------
  {
    GroupoidData gd = build_groupoid(spec, q, jobs);
    Report g = verify_groupoid(gd, seed, jobs);
    for (const CheckResult& c : g.checks)
      rep.add("groupoid: " + c.name, c.passed, c.certified_order, c.witness);
  }

  // ---- small differential-identity sweeps, bundled -------------------------
  {
    bool d_sq = true;
    for (int p = 1; p <= 2 && d_sq; ++p)
      for (const IndexTuple& t : cochain_window_basis(spec, 2, p)) {
        UTensor u(spec.d, spec.m, p);
        u.add_term(t, Polynomial::constant(spec.m, Rational(1)));
        Cochain c = cochain_from_tensor(spec, u);
        if (!dH(spec, dH(spec, c)).is_zero()) {
          d_sq = false;
          break;
        }
      }
    rep.add("cochain differential squares to zero (degree <= 2 window sweep)",
            d_sq, 2);

    bool b_sq = true;
    for (int p = 2; p <= 3 && b_sq; ++p)
      for (const IndexTuple& key : index_tuples(spec.d, 1, p)) {
        JetTensor t = jt_zero(spec, static_cast<std::size_t>(p), q);
        jt_add_cell(t, key, Polynomial::constant(spec.m, Rational(1)));
        if (!bH_reduced(spec, bH_reduced(spec, ChainReduced{t})).t.is_zero()) {
          b_sq = false;
          break;
        }
      }
    rep.add("reduced chain boundary squares to zero (slot degree <= 1 sweep)",
            b_sq, q);
  }

  return rep;
}

}  // namespace liejets
