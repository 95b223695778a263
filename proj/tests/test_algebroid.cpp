#include <gtest/gtest.h>

#include "liejets/algebroid.hpp"

namespace liejets {
namespace {

Polynomial P(const AlgebroidSpec& s, const std::string& text) {
  return parse_polynomial(text, s.var_names);
}

TEST(Algebroid, TangentBracketExample) {
  const auto spec = tangent_spec(1);
  // [d/dy, y d/dy] = d/dy
  LElement a = l_generator(spec, 0);
  LElement b = l_scale(P(spec, "y1"), l_generator(spec, 0));
  EXPECT_EQ(bracket(spec, a, b), l_generator(spec, 0));
}

TEST(Algebroid, AbelianBracketVanishes) {
  const auto spec = abelian_spec(2);
  EXPECT_TRUE(bracket(spec, l_generator(spec, 0), l_generator(spec, 1)).is_zero());
}

TEST(Algebroid, SolvableBracketExample) {
  const auto spec = solvable_spec();
  const LElement b21 = bracket(spec, l_generator(spec, 1), l_generator(spec, 0));
  LElement want = l_zero(spec);
  want.comps[1] = Polynomial::constant(1, -1);
  EXPECT_EQ(b21, want);  // [e2, e1] = -e2
}

TEST(Algebroid, AnchorApplyExamples) {
  const auto spec = tangent_spec(1);
  EXPECT_EQ(anchor_apply(spec, l_generator(spec, 0), P(spec, "y1^2")),
            P(spec, "2*y1"));
  EXPECT_EQ(anchor_apply(spec, l_scale(P(spec, "y1"), l_generator(spec, 0)),
                         P(spec, "y1")),
            P(spec, "y1"));
}

TEST(Algebroid, AxiomGatePassesOnBundledSpecs) {
  for (const auto& spec : bundled_specs()) {
    const Report rep = check_axioms(spec);
    EXPECT_TRUE(rep.all_passed()) << spec.name << "\n" << rep.text_summary();
  }
}

TEST(Algebroid, BrokenSpecFailsJacobi) {
  const Report rep = check_axioms(broken_spec());
  EXPECT_FALSE(rep.all_passed());
  bool jacobi_failed = false;
  for (const auto& c : rep.checks) {
    if (c.name == "jacobi") {
      jacobi_failed = !c.passed;
    } else {
      EXPECT_TRUE(c.passed) << c.name;
    }
  }
  EXPECT_TRUE(jacobi_failed);
}

// Setting [e1,e2] = e1 on the abelian rank-3 bundle produces a genuine Lie
// algebra (the affine algebra plus a central factor), so the axiom gate must
// accept it; rejecting it would be a false positive.
TEST(Algebroid, SingleStructureConstantOnAbelian3StaysLie) {
  AlgebroidSpec s = abelian_spec(3);
  std::vector<Polynomial> c(3, Polynomial(1));
  c[0] = Polynomial::constant(1, 1);
  s.structure[{0, 1}] = c;
  s.name = "abelian3-affine";
  EXPECT_TRUE(check_axioms(s).all_passed());
}

TEST(Algebroid, ValidateRejectsMalformedSpecs) {
  AlgebroidSpec s = tangent_spec(1);
  s.anchor.clear();
  EXPECT_THROW(s.validate(), SpecError);

  AlgebroidSpec s2 = solvable_spec();
  s2.structure[{1, 0}] = s2.structure[{0, 1}];
  EXPECT_THROW(s2.validate(), SpecError);

  AlgebroidSpec s3 = tangent_spec(2);
  s3.point = {Rational(0)};
  EXPECT_THROW(s3.validate(), SpecError);
}

TEST(Algebroid, FingerprintIgnoresDisplayNames) {
  AlgebroidSpec a = tangent_spec(2);
  AlgebroidSpec b = tangent_spec(2);
  b.name = "renamed";
  b.var_names = {"u", "v"};
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), abelian_spec(2).fingerprint());
}

TEST(Algebroid, LeibnizHoldsWithPolynomialCoefficients) {
  const auto spec = anchored_rank1_spec();
  Sampler s(kDefaultSeed);
  for (int t = 0; t < 5; ++t) {
    const LElement a = sample_l(s, spec, 2, 2);
    const LElement b = sample_l(s, spec, 2, 2);
    const Polynomial f = s.polynomial(1, 2, 2);
    EXPECT_EQ(bracket(spec, a, l_scale(f, b)),
              l_add(l_scale(f, bracket(spec, a, b)),
                    l_scale(anchor_apply(spec, a, f), b)));
  }
}

}  // namespace
}  // namespace liejets
