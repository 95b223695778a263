#include <gtest/gtest.h>

#include <string>
#include <utility>
#include <vector>

#include "liejets/complexes.hpp"
#include "liejets/sampling.hpp"

using namespace liejets;

namespace {

Polynomial P(const AlgebroidSpec& s, const std::string& text) {
  return parse_polynomial(text, s.var_names);
}

// Cochain built literally from (tuple, coefficient) cells.
Cochain mk_cochain(const AlgebroidSpec& spec, int arity,
                   std::vector<std::pair<IndexTuple, std::string>> cells) {
  Cochain c = cochain_zero(spec, arity);
  for (auto& [t, f] : cells) c.tensor.add_term(t, P(spec, f));
  return c;
}

// Jet tensor built literally from (tuple, coefficient) cells.
JetTensor mk_jt(const AlgebroidSpec& spec, int arity, int order,
                std::vector<std::pair<IndexTuple, std::string>> cells) {
  JetTensor t = jt_zero(spec, arity, order);
  for (auto& [k, f] : cells) jt_add_cell(t, k, P(spec, f));
  return t;
}

// Multiply slot 0 of a jet tensor by a dual-basis jet, through honest jet
// products (used to probe linearity of the bar differential over the jet
// algebra acting on the module slot).
JetTensor slot0_mul(const AlgebroidSpec& spec, const MultiIndex& b,
                    const JetTensor& t) {
  JetTensor out = jt_zero(spec, t.arity, t.order);
  for (const auto& [key, f] : t.cells) {
    const Jet prod = jet_mul(spec, jet_basis(spec, b, t.order),
                             jet_basis(spec, key.front(), t.order));
    const auto prod_coeffs = prod.coeffs();
    for (const auto& [z, g] : prod_coeffs) {
      IndexTuple k = key;
      k.front() = z;
      jt_add_cell(out, k, f * g);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial evaluation and graded-complex plumbing
// ---------------------------------------------------------------------------

TEST(PolyEvalAt, ExactValuesAndDimensionCheck) {
  const AlgebroidSpec spec = tangent_spec(1);
  const Polynomial f = P(spec, "y1^2 + 2");
  EXPECT_EQ(poly_eval_at(f, {Rational(3)}), Rational(11));
  EXPECT_EQ(poly_eval_at(f, {Rational(-1, 2)}), Rational(9, 4));
  EXPECT_THROW(poly_eval_at(f, {Rational(1), Rational(2)}), SpecError);
}

TEST(GradedComplexValidation, RejectsNonVanishingSquare) {
  Matrix<Polynomial> one(1, 1, Polynomial(1));
  one.at(0, 0) = Polynomial::constant(1, 1);
  std::map<int, std::size_t> ranks{{0, 1}, {1, 1}, {2, 1}};
  std::map<int, Matrix<Polynomial>> diffs{{1, one}, {2, one}};
  EXPECT_THROW(make_graded_complex("bad", -1, ranks, diffs), SpecError);
}

TEST(GradedComplexValidation, RejectsShapeMismatch) {
  Matrix<Polynomial> wide(2, 3, Polynomial(1));
  std::map<int, std::size_t> ranks{{0, 1}, {1, 3}};
  std::map<int, Matrix<Polynomial>> diffs{{1, wide}};
  EXPECT_THROW(make_graded_complex("bad", -1, ranks, diffs), SpecError);
}

TEST(GradedComplexJson, FrozenKoszulLine) {
  const AlgebroidSpec spec = tangent_spec(1);
  const GradedComplex k = koszul_complex(spec, 2);
  ASSERT_EQ(k.ranks.at(0), 3u);
  ASSERT_EQ(k.ranks.at(1), 2u);
  const nlohmann::json j = graded_complex_to_json(k, {Rational(5)});
  ASSERT_EQ(j.at("pieces").size(), 2u);
  EXPECT_EQ(j.at("pieces")[0].at("homological_degree"), 0);
  EXPECT_EQ(j.at("pieces")[0].at("rank"), 3);
  EXPECT_TRUE(j.at("pieces")[0].at("differential_matrix").empty());
  const std::vector<std::string> want{"0", "0", "1", "0", "0", "1"};
  std::vector<std::string> got;
  const auto& mat = j.at("pieces")[1].at("differential_matrix");
  for (const auto& e : mat) got.push_back(e.get<std::string>());
  EXPECT_EQ(got, want);
}

TEST(IndexTuples, EnumerationIsSortedAndComplete) {
  const auto tuples = index_tuples(1, 2, 2);
  ASSERT_EQ(tuples.size(), 9u);
  for (std::size_t i = 0; i + 1 < tuples.size(); ++i)
    EXPECT_TRUE(TupleLess{}(tuples[i], tuples[i + 1]));
  EXPECT_EQ(index_tuples(2, 1, 0).size(), 1u);  // the empty tuple
  EXPECT_EQ(index_tuples(2, 1, 1).size(), 3u);
}

// ---------------------------------------------------------------------------
// Cochain differential
// ---------------------------------------------------------------------------

TEST(CochainDifferential, FrameElementsAreClosed) {
  for (const AlgebroidSpec& spec : bundled_specs()) {
    for (int i = 0; i < spec.d; ++i) {
      const Cochain c = mk_cochain(
          spec, 1, {{IndexTuple{unit_index(spec.d, i)}, "1"}});
      EXPECT_TRUE(dH(spec, c).is_zero()) << spec.name << " frame " << i;
    }
  }
}

TEST(CochainDifferential, UnitMapsToUnitSquare) {
  const AlgebroidSpec spec = tangent_spec(1);
  const Cochain one = mk_cochain(spec, 1, {{IndexTuple{{0}}, "1"}});
  const Cochain want = mk_cochain(spec, 2, {{IndexTuple{{0}, {0}}, "1"}});
  EXPECT_EQ(dH(spec, one), want);

  // A coefficient rides along: d(f * 1) = f * (1 x 1).
  const Cochain f_one = mk_cochain(spec, 1, {{IndexTuple{{0}}, "y1"}});
  const Cochain f_want = mk_cochain(spec, 2, {{IndexTuple{{0}, {0}}, "y1"}});
  EXPECT_EQ(dH(spec, f_one), f_want);
}

TEST(CochainDifferential, FrozenSecondPowerTangent) {
  const AlgebroidSpec spec = tangent_spec(1);
  const Cochain dd = mk_cochain(spec, 1, {{IndexTuple{{2}}, "1"}});
  const Cochain want = mk_cochain(spec, 2, {{IndexTuple{{1}, {1}}, "-2"}});
  EXPECT_EQ(dH(spec, dd), want);
}

TEST(CochainDifferential, DegreeZeroIsClosed) {
  const AlgebroidSpec spec = anchored_rank1_spec();
  const Cochain f = cochain_scalar(spec, P(spec, "y1^2 - 3"));
  EXPECT_TRUE(dH(spec, f).is_zero());
}

TEST(CochainDifferential, SquaresToZeroSweep) {
  for (const AlgebroidSpec& spec : bundled_specs()) {
    for (int p = 1; p <= 2; ++p) {
      for (const auto& t : index_tuples(spec.d, 2, p)) {
        Cochain c = cochain_zero(spec, p);
        c.tensor.add_term(t, P(spec, "1"));
        EXPECT_TRUE(dH(spec, dH(spec, c)).is_zero())
            << spec.name << " arity " << p;
      }
    }
    // One polynomial-coefficient element per spec.
    Cochain c = cochain_zero(spec, 2);
    c.tensor.add_term(index_tuples(spec.d, 2, 2).back(), P(spec, "y1"));
    EXPECT_TRUE(dH(spec, dH(spec, c)).is_zero()) << spec.name;
  }
  // One deeper sweep where the fibre is one-dimensional.
  const AlgebroidSpec tan = tangent_spec(1);
  for (const auto& t : index_tuples(1, 2, 3)) {
    Cochain c = cochain_zero(tan, 3);
    c.tensor.add_term(t, P(tan, "1"));
    EXPECT_TRUE(dH(tan, dH(tan, c)).is_zero());
  }
}

TEST(CochainDifferential, GradedDerivationOverCup) {
  for (const AlgebroidSpec& spec : bundled_specs()) {
    Sampler s(kDefaultSeed);
    const auto ops = index_tuples(spec.d, 2, 1);
    for (int trial = 0; trial < 4; ++trial) {
      Cochain a = cochain_zero(spec, 1);
      a.tensor.add_term(ops[static_cast<std::size_t>(
                            s.range(0, static_cast<int>(ops.size()) - 1))],
                        P(spec, "y1"));
      a.tensor.add_term(ops[static_cast<std::size_t>(
                            s.range(0, static_cast<int>(ops.size()) - 1))],
                        Polynomial::constant(spec.m, s.rational()));
      Cochain b = cochain_zero(spec, 2);
      const auto pairs = index_tuples(spec.d, 2, 2);
      b.tensor.add_term(pairs[static_cast<std::size_t>(
                            s.range(0, static_cast<int>(pairs.size()) - 1))],
                        Polynomial::constant(spec.m, s.nonzero_rational()));
      const Cochain lhs = dH(spec, cup(spec, a, b));
      const Cochain rhs =
          cup(spec, dH(spec, a), b) - cup(spec, a, dH(spec, b));
      EXPECT_EQ(lhs, rhs) << spec.name << " trial " << trial;

      // Degree-0 left factor: d(f cup b) = f cup d(b).
      const Cochain f = cochain_scalar(spec, P(spec, "y1"));
      EXPECT_EQ(dH(spec, cup(spec, f, b)), cup(spec, f, dH(spec, b)))
          << spec.name;
    }
  }
}

// ---------------------------------------------------------------------------
// Cup product
// ---------------------------------------------------------------------------

TEST(CupProduct, SignOnTwoDegreeOneFactors) {
  const AlgebroidSpec spec = tangent_spec(1);
  const Cochain d1 = mk_cochain(spec, 1, {{IndexTuple{{1}}, "1"}});
  const Cochain want = mk_cochain(spec, 2, {{IndexTuple{{1}, {1}}, "-1"}});
  EXPECT_EQ(cup(spec, d1, d1), want);
}

TEST(CupProduct, ScalarFactorsMultiplyThrough) {
  const AlgebroidSpec spec = solvable_spec();
  const Cochain f = cochain_scalar(spec, P(spec, "y1"));
  const Cochain c =
      mk_cochain(spec, 2, {{IndexTuple{{1, 0}, {0, 1}}, "1 + y1"}});
  EXPECT_EQ(cup(spec, f, c), P(spec, "y1") * c);
  // Right factor: the coefficient enters through the last slot, which for a
  // plain monomial tensor is again global multiplication.
  EXPECT_EQ(cup(spec, c, f), P(spec, "y1") * c);
}

TEST(CupProduct, Associativity) {
  const AlgebroidSpec spec = anchored_rank1_spec();
  Sampler s(kDefaultSeed);
  const auto ops = index_tuples(spec.d, 2, 1);
  for (int trial = 0; trial < 5; ++trial) {
    auto pick = [&]() {
      Cochain c = cochain_zero(spec, 1);
      c.tensor.add_term(ops[static_cast<std::size_t>(
                            s.range(0, static_cast<int>(ops.size()) - 1))],
                        Polynomial::constant(spec.m, s.nonzero_rational()));
      c.tensor.add_term(ops[static_cast<std::size_t>(
                            s.range(0, static_cast<int>(ops.size()) - 1))],
                        P(spec, "y1"));
      return c;
    };
    const Cochain a = pick(), b = pick(), c = pick();
    EXPECT_EQ(cup(spec, cup(spec, a, b), c), cup(spec, a, cup(spec, b, c)));
  }
}

// ---------------------------------------------------------------------------
// Jet tensors
// ---------------------------------------------------------------------------

TEST(JetTensorOps, CartesianExpansion) {
  const AlgebroidSpec spec = tangent_spec(1);
  Jet a(1, 1, 3);
  a.add_term({0}, P(spec, "y1"));
  a.add_term({1}, P(spec, "1"));
  Jet b(1, 1, 3);
  b.add_term({1}, P(spec, "2"));
  b.add_term({2}, P(spec, "-1"));
  const JetTensor t = jt_from_jets(spec, {a, b}, 3);
  const JetTensor want = mk_jt(spec, 2, 3,
                               {{IndexTuple{{0}, {1}}, "2*y1"},
                                {IndexTuple{{0}, {2}}, "-y1"},
                                {IndexTuple{{1}, {1}}, "2"},
                                {IndexTuple{{1}, {2}}, "-1"}});
  EXPECT_EQ(t, want);
}

TEST(JetTensorOps, TruncationAndWindowGuards) {
  const AlgebroidSpec spec = tangent_spec(1);
  const JetTensor t = mk_jt(spec, 2, 3,
                            {{IndexTuple{{0}, {2}}, "1"},
                             {IndexTuple{{1}, {1}}, "y1"}});
  const JetTensor cut = jt_truncated(t, 2);
  const JetTensor want = mk_jt(spec, 2, 2, {{IndexTuple{{1}, {1}}, "y1"}});
  EXPECT_EQ(cut, want);
  EXPECT_TRUE(jt_equal_at_order(t, t + (t - t), 3));

  JetTensor bad = jt_zero(spec, 1, 2);
  EXPECT_THROW(jt_add_cell(bad, IndexTuple{{2}}, P(spec, "1")), OrderError);
  EXPECT_THROW(jt_zero(spec, 1, 0), OrderError);
}

// ---------------------------------------------------------------------------
// Reduced chain differential
// ---------------------------------------------------------------------------

TEST(ChainReducedDifferential, LowDegreesVanish) {
  const AlgebroidSpec spec = tangent_spec(1);
  const ChainReduced deg0{mk_jt(spec, 0, 3, {{IndexTuple{}, "y1"}})};
  EXPECT_TRUE(bH_reduced(spec, deg0).t.is_zero());
  const ChainReduced deg1{mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "1"}})};
  EXPECT_TRUE(bH_reduced(spec, deg1).t.is_zero());
}

TEST(ChainReducedDifferential, FrozenTangentValues) {
  const AlgebroidSpec spec = tangent_spec(1);
  // xi_1 x xi_1 |-> -(xi_1 xi_1) = -2 xi_2 (head and tail vanish).
  const ChainReduced x{mk_jt(spec, 2, 3, {{IndexTuple{{1}, {1}}, "1"}})};
  EXPECT_EQ(bH_reduced(spec, x).t,
            mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "-2"}}));
  // xi_0 x xi_0 |-> xi_0 - xi_0 + xi_0 = xi_0.
  const ChainReduced u{mk_jt(spec, 2, 3, {{IndexTuple{{0}, {0}}, "1"}})};
  EXPECT_EQ(bH_reduced(spec, u).t,
            mk_jt(spec, 1, 3, {{IndexTuple{{0}}, "1"}}));
  // xi_0 x xi_1 |-> xi_1 - xi_0 xi_1 = 0.
  const ChainReduced v{mk_jt(spec, 2, 3, {{IndexTuple{{0}, {1}}, "1"}})};
  EXPECT_TRUE(bH_reduced(spec, v).t.is_zero());
}

TEST(ChainReducedDifferential, SquaresToZeroSweep) {
  const AlgebroidSpec tan = tangent_spec(1);
  for (int p = 2; p <= 4; ++p)
    for (const auto& t : index_tuples(1, 2, p)) {
      ChainReduced c{jt_zero(tan, p, 3)};
      jt_add_cell(c.t, t, P(tan, "y1"));
      EXPECT_TRUE(bH_reduced(tan, bH_reduced(tan, c)).t.is_zero());
    }
  const AlgebroidSpec sol = solvable_spec();
  for (int p = 2; p <= 3; ++p)
    for (const auto& t : index_tuples(2, 1, p)) {
      ChainReduced c{jt_zero(sol, p, 2)};
      jt_add_cell(c.t, t, P(sol, "1"));
      EXPECT_TRUE(bH_reduced(sol, bH_reduced(sol, c)).t.is_zero());
    }
}

// ---------------------------------------------------------------------------
// Unreduced chain differential
// ---------------------------------------------------------------------------

TEST(ChainUnreducedDifferential, DegreeOneVanishesByCommutativity) {
  const AlgebroidSpec spec = anchored_rank1_spec();
  const ChainUnreduced x{mk_jt(spec, 2, 3,
                               {{IndexTuple{{1}, {2}}, "y1"},
                                {IndexTuple{{0}, {1}}, "1"}})};
  EXPECT_TRUE(bH_unreduced(spec, x).t.is_zero());
}

TEST(ChainUnreducedDifferential, SquaresToZeroSweep) {
  const AlgebroidSpec tan = tangent_spec(1);
  for (int slots = 3; slots <= 4; ++slots)
    for (const auto& t : index_tuples(1, 2, slots)) {
      ChainUnreduced c{jt_zero(tan, slots, 3)};
      jt_add_cell(c.t, t, P(tan, "1"));
      EXPECT_TRUE(bH_unreduced(tan, bH_unreduced(tan, c)).t.is_zero());
    }
  const AlgebroidSpec sol = solvable_spec();
  for (const auto& t : index_tuples(2, 1, 3)) {
    ChainUnreduced c{jt_zero(sol, 3, 2)};
    jt_add_cell(c.t, t, P(sol, "y1"));
    EXPECT_TRUE(bH_unreduced(sol, bH_unreduced(sol, c)).t.is_zero());
  }
}

TEST(ChainUnreducedDifferential, CompatibleWithReduction) {
  const AlgebroidSpec tan = tangent_spec(1);
  for (int slots = 2; slots <= 4; ++slots)
    for (const auto& t : index_tuples(1, 2, slots)) {
      ChainUnreduced c{jt_zero(tan, slots, 3)};
      jt_add_cell(c.t, t, P(tan, "y1"));
      EXPECT_EQ(reduce_chain(bH_unreduced(tan, c)).t,
                bH_reduced(tan, reduce_chain(c)).t);
    }
  const AlgebroidSpec sol = solvable_spec();
  for (const auto& t : index_tuples(2, 1, 3)) {
    ChainUnreduced c{jt_zero(sol, 3, 2)};
    jt_add_cell(c.t, t, P(sol, "1 - y1"));
    EXPECT_EQ(reduce_chain(bH_unreduced(sol, c)).t,
              bH_reduced(sol, reduce_chain(c)).t);
  }
}

TEST(ReduceChain, KeepsUnitSlotOnly) {
  const AlgebroidSpec spec = tangent_spec(1);
  const ChainUnreduced x{mk_jt(spec, 2, 3,
                               {{IndexTuple{{0}, {2}}, "y1"},
                                {IndexTuple{{1}, {1}}, "1"}})};
  EXPECT_EQ(reduce_chain(x).t, mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "y1"}}));
}

// ---------------------------------------------------------------------------
// Bar complex
// ---------------------------------------------------------------------------

TEST(BarComplex, DifferentialSquaresToZero) {
  const AlgebroidSpec tan = tangent_spec(1);
  for (int slots = 2; slots <= 4; ++slots)
    for (const auto& t : index_tuples(1, 2, slots)) {
      BarElement b{jt_zero(tan, slots, 3)};
      jt_add_cell(b.t, t, P(tan, "y1"));
      EXPECT_TRUE(bar_diff(tan, bar_diff(tan, b)).t.is_zero());
    }
  const AlgebroidSpec sol = solvable_spec();
  for (const auto& t : index_tuples(2, 1, 3)) {
    BarElement b{jt_zero(sol, 3, 2)};
    jt_add_cell(b.t, t, P(sol, "1"));
    EXPECT_TRUE(bar_diff(sol, bar_diff(sol, b)).t.is_zero());
  }
}

TEST(BarComplex, AugmentationEdge) {
  const AlgebroidSpec spec = tangent_spec(1);
  // A degree-0 element maps to its augmentation.
  const BarElement u{mk_jt(spec, 1, 3, {{IndexTuple{{0}}, "y1"}})};
  EXPECT_EQ(bar_diff(spec, u).t, mk_jt(spec, 0, 3, {{IndexTuple{}, "y1"}}));
  const BarElement v{mk_jt(spec, 1, 3, {{IndexTuple{{1}}, "1"}})};
  EXPECT_TRUE(bar_diff(spec, v).t.is_zero());
}

TEST(BarComplex, HomotopyFrozenValues) {
  const AlgebroidSpec spec = tangent_spec(1);
  // h(f) = f * xi_0 on the augmentation piece.
  const BarElement f = bar_scalar(spec, P(spec, "1"), 3);
  EXPECT_EQ(bar_homotopy(spec, f).t,
            mk_jt(spec, 1, 3, {{IndexTuple{{0}}, "1"}}));
  // h(xi_0) = xi_0 x xi_0.
  const BarElement u{mk_jt(spec, 1, 3, {{IndexTuple{{0}}, "1"}})};
  EXPECT_EQ(bar_homotopy(spec, u).t,
            mk_jt(spec, 2, 3, {{IndexTuple{{0}, {0}}, "1"}}));
}

TEST(BarComplex, HomotopyContractsIdentity) {
  // b'h + hb' = id degreewise; on the augmentation piece b'h = id.
  const AlgebroidSpec tan = tangent_spec(1);
  const BarElement f = bar_scalar(tan, P(tan, "y1 - 2"), 3);
  EXPECT_EQ(bar_diff(tan, bar_homotopy(tan, f)).t, f.t);
  for (int slots = 1; slots <= 3; ++slots)
    for (const auto& t : index_tuples(1, 2, slots)) {
      BarElement b{jt_zero(tan, slots, 3)};
      jt_add_cell(b.t, t, P(tan, "y1"));
      const JetTensor lhs = bar_diff(tan, bar_homotopy(tan, b)).t +
                            bar_homotopy(tan, bar_diff(tan, b)).t;
      EXPECT_EQ(lhs, b.t);
    }
  const AlgebroidSpec sol = solvable_spec();
  for (int slots = 1; slots <= 3; ++slots)
    for (const auto& t : index_tuples(2, 1, slots)) {
      BarElement b{jt_zero(sol, slots, 2)};
      jt_add_cell(b.t, t, P(sol, "1"));
      const JetTensor lhs = bar_diff(sol, bar_homotopy(sol, b)).t +
                            bar_homotopy(sol, bar_diff(sol, b)).t;
      EXPECT_EQ(lhs, b.t);
    }
}

TEST(BarComplex, DifferentialIsLinearOverTheModuleSlot) {
  const AlgebroidSpec spec = tangent_spec(1);
  for (const auto& t : index_tuples(1, 2, 3)) {
    BarElement b{jt_zero(spec, 3, 3)};
    jt_add_cell(b.t, t, P(spec, "y1"));
    const JetTensor lhs = bar_diff(spec, BarElement{slot0_mul(spec, {1}, b.t)}).t;
    const JetTensor rhs = slot0_mul(spec, {1}, bar_diff(spec, b).t);
    EXPECT_EQ(lhs, rhs);
  }
}

// ---------------------------------------------------------------------------
// Cap products
// ---------------------------------------------------------------------------

TEST(CapReduced, FrozenTangentValues) {
  const AlgebroidSpec spec = tangent_spec(1);
  const Cochain D = mk_cochain(spec, 1, {{IndexTuple{{1}}, "1"}});
  const ChainReduced c{mk_jt(spec, 2, 3, {{IndexTuple{{1}, {2}}, "1"}})};
  // Evaluate the first slot: xi_1(d) = 1, leaving xi_2.
  EXPECT_EQ(cap_reduced(spec, D, c).t,
            mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "1"}}));
  // Full-arity pairing ends in the scalar piece.
  const Cochain DD = mk_cochain(spec, 2, {{IndexTuple{{1}, {2}}, "1"}});
  EXPECT_EQ(cap_reduced(spec, DD, c).t,
            mk_jt(spec, 0, 3, {{IndexTuple{}, "1"}}));
  // Mismatched evaluation kills the cell.
  const Cochain E = mk_cochain(spec, 1, {{IndexTuple{{2}}, "1"}});
  EXPECT_TRUE(cap_reduced(spec, E, c).t.is_zero());
}

TEST(CapReduced, ScalarActsAsCoefficient) {
  const AlgebroidSpec spec = solvable_spec();
  const Cochain f = cochain_scalar(spec, P(spec, "y1"));
  const ChainReduced c{mk_jt(spec, 2, 2,
                             {{IndexTuple{{1, 0}, {0, 1}}, "1"},
                              {IndexTuple{{0, 0}, {1, 0}}, "3"}})};
  EXPECT_EQ(cap_reduced(spec, f, c).t, (P(spec, "y1") * c.t));
  const Cochain too_big = cochain_zero(spec, 3);
  EXPECT_THROW(cap_reduced(spec, too_big, c), SpecError);
}

TEST(CapUnreduced, ScalarAndUnitOperators) {
  const AlgebroidSpec spec = tangent_spec(1);
  const ChainUnreduced x{mk_jt(spec, 3, 3,
                               {{IndexTuple{{1}, {0}, {2}}, "y1"}})};
  // Degree-0 cochain: coefficient multiplication, order unchanged.
  const Cochain f = cochain_scalar(spec, P(spec, "2*y1"));
  EXPECT_EQ(cap_unreduced(spec, f, x).t, (P(spec, "2*y1") * x.t));
  // The unit operator merges a unit slot with no correction.
  const Cochain one = mk_cochain(spec, 1, {{IndexTuple{{0}}, "1"}});
  EXPECT_EQ(cap_unreduced(spec, one, x).t,
            mk_jt(spec, 2, 3, {{IndexTuple{{1}, {2}}, "y1"}}));
}

TEST(CapUnreduced, FrozenDerivativeShift) {
  const AlgebroidSpec spec = tangent_spec(1);
  // d caps xi_0 x xi_3: slot 1 shifts down to xi_2, merged with xi_0.
  const Cochain D = mk_cochain(spec, 1, {{IndexTuple{{1}}, "1"}});
  const ChainUnreduced x{mk_jt(spec, 2, 4, {{IndexTuple{{0}, {3}}, "1"}})};
  const ChainUnreduced got = cap_unreduced(spec, D, x);
  EXPECT_EQ(got.t, mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "1"}}));
  // And a divided-power product: d caps xi_1 x xi_2 -> xi_1 * xi_1 = 2 xi_2.
  const ChainUnreduced y{mk_jt(spec, 2, 4, {{IndexTuple{{1}, {2}}, "1"}})};
  EXPECT_EQ(cap_unreduced(spec, D, y).t,
            mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "2"}}));
  // Order exhaustion is an error, not a silent lie.
  const Cochain deep = mk_cochain(spec, 1, {{IndexTuple{{4}}, "1"}});
  EXPECT_THROW(cap_unreduced(spec, deep, x), OrderError);
}

TEST(CapUnreduced, LeibnizRule) {
  // b(D cap x) = dH(D) cap x + (-1)^p D cap b(x), compared at the common
  // certified order.
  const std::vector<std::pair<std::string, AlgebroidSpec>> specs = {
      {"tangent1", tangent_spec(1)}, {"anchored1", anchored_rank1_spec()}};
  for (const auto& [name, spec] : specs) {
    const int q = 4;
    const Cochain D = mk_cochain(
        spec, 1, {{IndexTuple{{1}}, "y1"}, {IndexTuple{{2}}, "1"}});
    const int drop = cochain_filtration(D);
    for (const auto& t : index_tuples(spec.d, 2, 3)) {
      ChainUnreduced x{jt_zero(spec, 3, q)};
      jt_add_cell(x.t, t, P(spec, "y1"));
      const JetTensor lhs = bH_unreduced(spec, cap_unreduced(spec, D, x)).t;
      const JetTensor a = jt_truncated(
          cap_unreduced(spec, dH(spec, D), x).t, q - drop);
      const JetTensor b =
          cap_unreduced(spec, D, bH_unreduced(spec, x)).t;
      const JetTensor rhs = a - b;  // (-1)^{|D|} with |D| = 1
      EXPECT_TRUE(jt_equal_at_order(lhs, rhs, q - drop))
          << name << " cell " << jt_to_string(spec, x.t);
    }
  }
}

TEST(CapUnreduced, CompatibleWithReduction) {
  const AlgebroidSpec spec = anchored_rank1_spec();
  const int q = 4;
  const Cochain D = mk_cochain(
      spec, 1, {{IndexTuple{{1}}, "y1"}, {IndexTuple{{2}}, "2"}});
  const int drop = cochain_filtration(D);
  for (const auto& t : index_tuples(spec.d, 2, 3)) {
    ChainUnreduced x{jt_zero(spec, 3, q)};
    jt_add_cell(x.t, t, P(spec, "1 + y1"));
    const JetTensor lhs = reduce_chain(cap_unreduced(spec, D, x)).t;
    const JetTensor rhs = cap_reduced(spec, D, reduce_chain(x)).t;
    EXPECT_TRUE(jt_equal_at_order(lhs, rhs, q - drop));
  }
}

TEST(CapUnreduced, FlatActionEquivariance) {
  // The slot-wise flat action commutes with capping: the operator
  // coefficients are never differentiated.  This pins the reading of a
  // polynomial-coefficient operator cell as one monomial g * e^b acting
  // through the second structure, over a spec with a nonzero anchor.
  const AlgebroidSpec spec = anchored_rank1_spec();
  const int q = 4;
  const UElement l = u_gen(spec, 0);
  const Cochain D = mk_cochain(spec, 1, {{IndexTuple{{1}}, "y1"}});
  for (const auto& t : index_tuples(spec.d, 2, 2)) {
    ChainUnreduced x{jt_zero(spec, 2, q)};
    jt_add_cell(x.t, t, P(spec, "y1"));
    const JetTensor lhs = gnabla_tensor(spec, l, cap_unreduced(spec, D, x).t);
    const JetTensor rhs =
        cap_unreduced(spec, D,
                      ChainUnreduced{gnabla_tensor(spec, l, x.t)}).t;
    EXPECT_EQ(lhs, rhs) << jt_to_string(spec, x.t);
  }
  // Same identity over the solvable bracket with a two-term frame combination.
  const AlgebroidSpec sol = solvable_spec();
  const UElement l2 = u_gen(sol, 0) + u_gen(sol, 1);
  const Cochain D2 = mk_cochain(sol, 1, {{IndexTuple{{0, 1}}, "y1"}});
  for (const auto& t : index_tuples(sol.d, 1, 2)) {
    ChainUnreduced x{jt_zero(sol, 2, 3)};
    jt_add_cell(x.t, t, P(sol, "y1"));
    const JetTensor lhs = gnabla_tensor(sol, l2, cap_unreduced(sol, D2, x).t);
    const JetTensor rhs =
        cap_unreduced(sol, D2,
                      ChainUnreduced{gnabla_tensor(sol, l2, x.t)}).t;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(GnablaTensor, CoefficientLeibnizFrozen) {
  // Over the scaling anchor, the flat action differentiates coefficients:
  // acting on y * xi_0 gives y * xi_0 back (rho(e1)(y1) = y1).
  const AlgebroidSpec spec = anchored_rank1_spec();
  const JetTensor t = mk_jt(spec, 1, 2, {{IndexTuple{{0}}, "y1"}});
  EXPECT_EQ(gnabla_tensor(spec, u_gen(spec, 0), t),
            mk_jt(spec, 1, 1, {{IndexTuple{{0}}, "y1"}}));
  // Over the tangent algebroid: slot shifts with sign -1, window dropping
  // the contribution whose untouched slot overflows.
  const AlgebroidSpec tan = tangent_spec(1);
  const JetTensor x = mk_jt(tan, 2, 3, {{IndexTuple{{1}, {2}}, "1"}});
  EXPECT_EQ(gnabla_tensor(tan, u_gen(tan, 0), x),
            mk_jt(tan, 2, 2, {{IndexTuple{{1}, {1}}, "-1"}}));
  // Scalars move by the anchor derivation.
  const JetTensor s = mk_jt(spec, 0, 2, {{IndexTuple{}, "y1^2"}});
  EXPECT_EQ(gnabla_tensor(spec, u_gen(spec, 0), s),
            mk_jt(spec, 0, 1, {{IndexTuple{}, "2*y1^2"}}));
  EXPECT_THROW(gnabla_tensor(spec, u_one(spec), t), SpecError);
}

// ---------------------------------------------------------------------------
// Collapse maps and the pairing matrix
// ---------------------------------------------------------------------------

TEST(PsiMap, UnitSlotCollapse) {
  const AlgebroidSpec spec = tangent_spec(1);
  const BarElement b{mk_jt(spec, 2, 3, {{IndexTuple{{0}, {2}}, "1"}})};
  EXPECT_EQ(psi_map(spec, P(spec, "1"), b).t,
            mk_jt(spec, 1, 3, {{IndexTuple{{2}}, "1"}}));
  const BarElement c{mk_jt(spec, 2, 3, {{IndexTuple{{1}, {2}}, "1"}})};
  EXPECT_TRUE(psi_map(spec, P(spec, "y1"), c).t.is_zero());
}

TEST(PsiMap, CommutesWithDifferentials) {
  const AlgebroidSpec tan = tangent_spec(1);
  const Polynomial f = P(tan, "y1");
  for (int slots = 2; slots <= 3; ++slots)
    for (const auto& t : index_tuples(1, 2, slots)) {
      BarElement b{jt_zero(tan, slots, 3)};
      jt_add_cell(b.t, t, P(tan, "1"));
      EXPECT_EQ(psi_map(tan, f, bar_diff(tan, b)).t,
                bH_reduced(tan, psi_map(tan, f, b)).t);
    }
  const AlgebroidSpec sol = solvable_spec();
  for (const auto& t : index_tuples(2, 1, 3)) {
    BarElement b{jt_zero(sol, 3, 2)};
    jt_add_cell(b.t, t, P(sol, "y1"));
    EXPECT_EQ(psi_map(sol, P(sol, "1"), bar_diff(sol, b)).t,
              bH_reduced(sol, psi_map(sol, P(sol, "1"), b)).t);
  }
}

TEST(PsiMap, CapCompatibility) {
  // D cap psi(f, u) = psi(f, D cap u), compared at the capped order.
  const AlgebroidSpec spec = tangent_spec(1);
  const int q = 4;
  Sampler s(kDefaultSeed);
  const Cochain D = mk_cochain(
      spec, 1, {{IndexTuple{{1}}, "1"}, {IndexTuple{{2}}, "y1"}});
  const Cochain DD = mk_cochain(spec, 2, {{IndexTuple{{1}, {1}}, "y1"}});
  for (const auto& t : index_tuples(1, 2, 3)) {
    BarElement u{jt_zero(spec, 3, q)};
    jt_add_cell(u.t, t, Polynomial::constant(1, s.nonzero_rational()));
    const Polynomial f = P(spec, "y1");
    for (const Cochain& op : {D, DD}) {
      const int drop = cochain_filtration(op);
      const JetTensor lhs = jt_truncated(
          cap_reduced(spec, op, psi_map(spec, f, u)).t, q - drop);
      const JetTensor rhs = psi_map(spec, f, cap_bar(spec, op, u)).t;
      EXPECT_EQ(lhs, rhs);
    }
  }
  const AlgebroidSpec anc = anchored_rank1_spec();
  const Cochain E = mk_cochain(anc, 1, {{IndexTuple{{1}}, "y1"}});
  for (const auto& t : index_tuples(1, 1, 2)) {
    BarElement u{jt_zero(anc, 2, 3)};
    jt_add_cell(u.t, t, P(anc, "1 + y1"));
    const JetTensor lhs = jt_truncated(
        cap_reduced(anc, E, psi_map(anc, P(anc, "y1"), u)).t, 2);
    const JetTensor rhs = psi_map(anc, P(anc, "y1"), cap_bar(anc, E, u)).t;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(CapProducts, InterchangeWithCup) {
  // (D cup E) cap x = (-1)^{|D||E|} E cap (D cap x), both cap flavors.
  const AlgebroidSpec spec = tangent_spec(1);
  const Cochain D = mk_cochain(spec, 1, {{IndexTuple{{1}}, "y1"}});
  const Cochain E = mk_cochain(spec, 1, {{IndexTuple{{2}}, "1"}});
  for (const auto& t : index_tuples(1, 3, 3)) {
    ChainReduced c{jt_zero(spec, 3, 4)};
    jt_add_cell(c.t, t, P(spec, "1"));
    const JetTensor lhs = cap_reduced(spec, cup(spec, D, E), c).t;
    const JetTensor rhs =
        (Rational(-1) * cap_reduced(spec, E, cap_reduced(spec, D, c)).t);
    EXPECT_EQ(lhs, rhs);
  }
  for (const auto& t : index_tuples(1, 2, 3)) {
    ChainUnreduced c{jt_zero(spec, 3, 5)};
    jt_add_cell(c.t, t, P(spec, "y1"));
    const JetTensor lhs = cap_unreduced(spec, cup(spec, D, E), c).t;
    const JetTensor rhs =
        (Rational(-1) *
         cap_unreduced(spec, E, cap_unreduced(spec, D, c)).t);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(PhiComponent, DegreeOneIsTheIdentity) {
  for (const AlgebroidSpec& spec : bundled_specs()) {
    const int q = 3;
    const auto tuples = index_tuples(spec.d, q - 1, 1);
    const Matrix<Polynomial> m = phi_component(spec, q, 1);
    EXPECT_EQ(m, poly_identity(tuples.size(), spec.m)) << spec.name;
  }
}

TEST(PhiComponent, DegreeTwoSmallWindow) {
  const AlgebroidSpec spec = tangent_spec(1);
  const Matrix<Polynomial> m = phi_component(spec, 2, 2);
  ASSERT_EQ(m.rows(), 4u);
  EXPECT_EQ(m, poly_identity(4, 1));
  EXPECT_EQ(poly_det(m), Rational(1));
  // Degree zero: the empty pairing.
  const Matrix<Polynomial> m0 = phi_component(spec, 2, 0);
  ASSERT_EQ(m0.rows(), 1u);
  EXPECT_EQ(m0.at(0, 0), P(spec, "1"));
}

// ---------------------------------------------------------------------------
// Koszul complexes
// ---------------------------------------------------------------------------

TEST(KoszulElement, DifferentialSquaresToZero) {
  const AlgebroidSpec spec = abelian_spec(2);
  KoszulElement e = koszul_zero(spec, 4);
  koszul_add_term(e, {1, 0}, {1, 0}, P(spec, "y1"));
  koszul_add_term(e, {0, 2}, {1}, P(spec, "1"));
  const KoszulElement de = koszul_diff(spec, e);
  EXPECT_FALSE(de.terms.empty());
  EXPECT_TRUE(koszul_diff(spec, de).terms.empty());
  // Validation of the strictly decreasing invariant.
  KoszulElement bad = koszul_zero(spec, 2);
  EXPECT_THROW(koszul_add_term(bad, {0, 0}, {0, 1}, P(spec, "1")), SpecError);
  // Terms beyond the x-degree bound vanish in the truncated module.
  KoszulElement top = koszul_zero(spec, 1);
  koszul_add_term(top, {1, 0}, {0}, P(spec, "1"));
  EXPECT_TRUE(koszul_diff(spec, top).terms.empty());
}

TEST(KoszulComplex, LineShape) {
  const AlgebroidSpec spec = tangent_spec(1);
  const GradedComplex k = koszul_complex(spec, 3);
  EXPECT_EQ(k.ranks.at(0), 4u);
  EXPECT_EQ(k.ranks.at(1), 3u);
  const Matrix<Polynomial>& m = k.differentials.at(1);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      EXPECT_EQ(m.at(r, c),
                (r == c + 1) ? P(spec, "1") : Polynomial(spec.m));
}

TEST(KoszulComplex, PlaneShape) {
  const AlgebroidSpec spec = abelian_spec(2);
  const GradedComplex k = koszul_complex(spec, 2);
  EXPECT_EQ(k.ranks.at(0), 6u);
  EXPECT_EQ(k.ranks.at(1), 6u);
  EXPECT_EQ(k.ranks.at(2), 1u);
  // Construction already certified that consecutive differentials compose
  // to zero; spot-check one column of the top differential: xhat_2 xhat_1
  // maps to x_2 xhat_1 - x_1 xhat_2 (coordinates indexed from one).
  const auto& labels1 = k.labels.at(1);
  const Matrix<Polynomial>& m = k.differentials.at(2);
  int nonzero = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.at(r, 0).is_zero()) ++nonzero;
  EXPECT_EQ(nonzero, 2);
  EXPECT_EQ(labels1.size(), 6u);
}

TEST(KoszulDual, LineShape) {
  const AlgebroidSpec spec = tangent_spec(1);
  const GradedComplex k = koszul_dual_complex(spec, 3);
  EXPECT_EQ(k.direction, 1);
  EXPECT_EQ(k.ranks.at(0), 3u);
  EXPECT_EQ(k.ranks.at(1), 4u);
  const Matrix<Polynomial>& m = k.differentials.at(0);
  ASSERT_EQ(m.rows(), 4u);
  ASSERT_EQ(m.cols(), 3u);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      EXPECT_EQ(m.at(r, c),
                (r == c + 1) ? P(spec, "1") : Polynomial(spec.m));
}

TEST(KoszulDual, PlaneShape) {
  const AlgebroidSpec spec = abelian_spec(2);
  const GradedComplex k = koszul_dual_complex(spec, 2);
  EXPECT_EQ(k.ranks.at(0), 1u);
  EXPECT_EQ(k.ranks.at(1), 6u);
  EXPECT_EQ(k.ranks.at(2), 6u);
  // d squared = 0 was certified at construction; the degree-0 column hits
  // both generators with positive sign.
  const Matrix<Polynomial>& m = k.differentials.at(0);
  int nonzero = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.at(r, 0).is_zero()) ++nonzero;
  EXPECT_EQ(nonzero, 2);
}

TEST(KoszulFiber, BinomialRanksAndZeroDifferential) {
  const AlgebroidSpec spec = abelian_spec(2);
  const GradedComplex k = koszul_fiber_complex(spec);
  EXPECT_EQ(k.ranks.at(0), 1u);
  EXPECT_EQ(k.ranks.at(1), 2u);
  EXPECT_EQ(k.ranks.at(2), 1u);
  for (const auto& [n, m] : k.differentials) EXPECT_TRUE(matrix_is_zero(m));
  const AlgebroidSpec tan = tangent_spec(1);
  const GradedComplex k1 = koszul_fiber_complex(tan);
  EXPECT_EQ(k1.ranks.at(0), 1u);
  EXPECT_EQ(k1.ranks.at(1), 1u);
}
