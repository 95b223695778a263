// Tests for the homology engine: point evaluation, exact rank counts,
// window complexes for the chain/cochain theories, and the bundled report.
#include <gtest/gtest.h>

#include "liejets/homology.hpp"

using namespace liejets;

namespace {

Polynomial P(const AlgebroidSpec& s, const std::string& text) {
  return parse_polynomial(text, s.var_names);
}

std::vector<Rational> origin(const AlgebroidSpec& s) {
  return std::vector<Rational>(static_cast<std::size_t>(s.m), Rational(0));
}

// A one-arrow complex over one base variable whose single entry is the
// polynomial given by `text`.
GradedComplex one_arrow(const std::string& text) {
  AlgebroidSpec t = tangent_spec(1);
  std::map<int, std::size_t> ranks{{0, 1}, {1, 1}};
  Matrix<Polynomial> m(1, 1, Polynomial(t.m));
  m.at(0, 0) = P(t, text);
  std::map<int, Matrix<Polynomial>> diffs;
  diffs.emplace(0, m);
  return make_graded_complex("one-arrow", +1, ranks, diffs);
}

}  // namespace

TEST(EvaluateAtPoint, SubstitutesTheBasePoint) {
  GradedComplex g = one_arrow("y1");

  GradedComplex at2 = evaluate_at_point(g, {Rational(2)});
  ASSERT_TRUE(at2.differentials.at(0).at(0, 0).is_constant());
  EXPECT_EQ(at2.differentials.at(0).at(0, 0).constant_term(), Rational(2));
  EXPECT_EQ(at2.ranks, g.ranks);
  EXPECT_EQ(at2.direction, g.direction);

  GradedComplex at0 = evaluate_at_point(g, {Rational(0)});
  EXPECT_TRUE(at0.differentials.at(0).at(0, 0).is_zero());
}

TEST(EvaluateAtPoint, RejectsWrongPointDimension) {
  GradedComplex g = one_arrow("y1");
  EXPECT_THROW(evaluate_at_point(g, {Rational(1), Rational(1)}), SpecError);
  EXPECT_THROW(evaluate_at_point(g, {}), SpecError);
}

TEST(EvaluateAtPoint, NoBaseVariablesIsTheIdentity) {
  AlgebroidSpec s = abelian_spec(2, 0);
  GradedComplex g = koszul_complex(s, 2);
  GradedComplex e = evaluate_at_point(g, {});
  ASSERT_EQ(e.ranks, g.ranks);
  for (const auto& [n, mat] : g.differentials) {
    const Matrix<Polynomial>& em = e.differentials.at(n);
    for (std::size_t r = 0; r < mat.rows(); ++r)
      for (std::size_t c = 0; c < mat.cols(); ++c)
        EXPECT_EQ(em.at(r, c).constant_term(), mat.at(r, c).constant_term());
  }
}

TEST(EvaluateAtPoint, TangentDualRanksMatchAtTwoPoints) {
  AlgebroidSpec t = tangent_spec(1);
  GradedComplex dual = koszul_dual_complex(t, 3);
  HomologyTable h0 = homology_ranks(evaluate_at_point(dual, {Rational(0)}));
  HomologyTable h1 = homology_ranks(evaluate_at_point(dual, {Rational(1)}));
  EXPECT_EQ(h0.dims, h1.dims);
}

TEST(HomologyRanks, ZeroDifferentialsReturnTheRanks) {
  std::map<int, std::size_t> ranks{{0, 1}, {1, 2}, {2, 1}};
  std::map<int, Matrix<Polynomial>> diffs;
  diffs.emplace(1, Matrix<Polynomial>(1, 2, Polynomial(0)));
  diffs.emplace(2, Matrix<Polynomial>(2, 1, Polynomial(0)));
  GradedComplex g = make_graded_complex("zeros", -1, ranks, diffs);
  HomologyTable t = homology_ranks(g);
  EXPECT_EQ(t.at(0), 1);
  EXPECT_EQ(t.at(1), 2);
  EXPECT_EQ(t.at(2), 1);
}

TEST(HomologyRanks, RejectsNonConstantEntries) {
  GradedComplex g = one_arrow("y1");
  EXPECT_THROW(homology_ranks(g), SpecError);
}

TEST(HomologyRanks, ExactArrowHasNoHomologyInDegreeZero) {
  GradedComplex g = one_arrow("2");
  HomologyTable t = homology_ranks(g);
  EXPECT_EQ(t.at(0), 0);
  EXPECT_EQ(t.at(1), 0);
}

TEST(KoszulWindows, PrimalExactAndDualConcentrated) {
  for (int d : {1, 2}) {
    AlgebroidSpec s = (d == 1) ? tangent_spec(1) : abelian_spec(2);
    const int bound = 4;

    HomologyTable primal = homology_ranks(
        evaluate_at_point(koszul_complex(s, bound), origin(s)));
    EXPECT_EQ(primal.at(0), 1) << s.name;
    for (const auto& [n, v] : primal.dims) {
      if (n != 0) {
        EXPECT_EQ(v, 0) << s.name << " degree " << n;
      }
    }

    HomologyTable dual = homology_ranks(
        evaluate_at_point(koszul_dual_complex(s, bound), origin(s)));
    for (const auto& [n, v] : dual.dims)
      EXPECT_EQ(v, n == s.d ? 1 : 0) << s.name << " degree " << n;
  }
}

TEST(KoszulWindows, FiberComplexHasBinomialHomology) {
  AlgebroidSpec s = abelian_spec(2);
  HomologyTable t =
      homology_ranks(evaluate_at_point(koszul_fiber_complex(s), origin(s)));
  EXPECT_EQ(t.at(0), 1);
  EXPECT_EQ(t.at(1), 2);
  EXPECT_EQ(t.at(2), 1);
}

TEST(CochainWindow, BasisRespectsTheTotalDegreeBound) {
  AlgebroidSpec s = abelian_spec(2);
  std::vector<IndexTuple> b = cochain_window_basis(s, 2, 2);
  for (const IndexTuple& t : b) {
    int total = 0;
    for (const MultiIndex& a : t) total += degree(a);
    EXPECT_LE(total, 2);
    EXPECT_EQ(t.size(), 2u);
  }
  // pairs with |a|+|b| <= 2 over two generators: 1 + 4 + 10
  EXPECT_EQ(b.size(), 15u);
  EXPECT_EQ(cochain_window_basis(s, 2, 0).size(), 1u);
}

TEST(CochainWindow, ConstructionValidatesAndLabels) {
  AlgebroidSpec s = anchored_rank1_spec();
  GradedComplex g = cochain_window_complex(s, 3);
  EXPECT_EQ(g.direction, +1);
  ASSERT_EQ(g.ranks.size(), 4u);
  EXPECT_EQ(g.ranks.at(0), 1u);
  for (int p = 0; p <= 3; ++p)
    EXPECT_EQ(g.labels.at(p).size(), g.ranks.at(p)) << "degree " << p;
}

TEST(CochainWindow, LowCohomologyOracle) {
  for (const AlgebroidSpec& s : bundled_specs()) {
    HomologyTable t = homology_ranks(
        evaluate_at_point(cochain_window_complex(s, 2), s.point));
    EXPECT_EQ(t.at(0), 1) << s.name;
    EXPECT_EQ(t.at(1), s.d) << s.name;
  }
}

TEST(CochainWindow, NoBaseVariablesCase) {
  AlgebroidSpec s = abelian_spec(2, 0);
  HomologyTable t =
      homology_ranks(evaluate_at_point(cochain_window_complex(s, 2), {}));
  EXPECT_EQ(t.at(0), 1);
  EXPECT_EQ(t.at(1), 2);
}

TEST(ChainWindow, AgreesWithFiberInLowDegrees) {
  AlgebroidSpec t1 = tangent_spec(1);
  HomologyTable w =
      homology_ranks(evaluate_at_point(chain_window_complex(t1, 3), {Rational(0)}));
  EXPECT_EQ(w.at(0), 1);
  EXPECT_EQ(w.at(1), 1);
  // Degree 2 sees the non-regularity of the truncated algebra: the window
  // value is 1 (hand-checked for order 3) while the coordinate fiber complex
  // gives binomial(1,2) = 0.  This is the window-limited regime.
  EXPECT_EQ(w.at(2), 1);

  AlgebroidSpec a2 = abelian_spec(2);
  HomologyTable w2 =
      homology_ranks(evaluate_at_point(chain_window_complex(a2, 3), origin(a2)));
  EXPECT_EQ(w2.at(0), 1);
  EXPECT_EQ(w2.at(1), 2);
}

TEST(ChainWindow, StableUnderOrderGrowth) {
  AlgebroidSpec t1 = tangent_spec(1);
  HomologyTable a =
      homology_ranks(evaluate_at_point(chain_window_complex(t1, 3, 2), {Rational(0)}));
  HomologyTable b =
      homology_ranks(evaluate_at_point(chain_window_complex(t1, 4, 2), {Rational(0)}));
  EXPECT_EQ(a.at(0), b.at(0));
  EXPECT_EQ(a.at(1), b.at(1));
}

TEST(ChainWindow, DegreeOneBoundaryIsZero) {
  AlgebroidSpec s = solvable_spec();
  GradedComplex g = chain_window_complex(s, 3, 2);
  const Matrix<Polynomial>& d1 = g.differentials.at(1);
  for (std::size_t r = 0; r < d1.rows(); ++r)
    for (std::size_t c = 0; c < d1.cols(); ++c)
      EXPECT_TRUE(d1.at(r, c).is_zero());
}

TEST(HomologyTableJson, DeterministicAndSchemaVersioned) {
  HomologyTable t;
  t.dims[0] = 1;
  t.dims[1] = 2;
  t.dims[2] = 1;
  nlohmann::json j = homology_table_to_json(t);
  EXPECT_EQ(j.at("schema"), "liejets-homology/1");
  EXPECT_EQ(j.dump(),
            "{\"dims\":[{\"degree\":0,\"dim\":1},{\"degree\":1,\"dim\":2},"
            "{\"degree\":2,\"dim\":1}],\"schema\":\"liejets-homology/1\"}");
  EXPECT_EQ(homology_table_to_string(t), "{H0=1, H1=2, H2=1}");
}

TEST(HHReport, TangentBundlePassesEveryCheck) {
  AlgebroidSpec t1 = tangent_spec(1);
  Report r = hh_report(t1, 3, 2, 2, {Rational(0)});
  EXPECT_TRUE(r.all_passed()) << r.text_summary();

  bool has_groupoid = false;
  bool has_cochain = false;
  for (const CheckResult& c : r.checks) {
    if (c.name.rfind("groupoid: ", 0) == 0) has_groupoid = true;
    if (c.name.rfind("cochain H0", 0) == 0) has_cochain = true;
  }
  EXPECT_TRUE(has_groupoid);
  EXPECT_TRUE(has_cochain);
}

TEST(HHReport, SolvableCasePassesAndIsDeterministic) {
  AlgebroidSpec s = solvable_spec();
  Report a = hh_report(s, 3, 2, 2, s.point);
  Report b = hh_report(s, 3, 2, 2, s.point);
  EXPECT_TRUE(a.all_passed()) << a.text_summary();
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(HHReport, RejectsBadWindows) {
  AlgebroidSpec t1 = tangent_spec(1);
  EXPECT_THROW(hh_report(t1, 1, 2, 2, {Rational(0)}), SpecError);
  EXPECT_THROW(hh_report(t1, 3, 2, 2, {}), SpecError);
}
