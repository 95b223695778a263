#include <gtest/gtest.h>

#include "liejets/polynomial.hpp"
#include "liejets/sampling.hpp"

namespace liejets {
namespace {

const std::vector<std::string> kY1 = {"y1"};
const std::vector<std::string> kY12 = {"y1", "y2"};

Polynomial P1(const std::string& s) { return parse_polynomial(s, kY1); }
Polynomial P2(const std::string& s) { return parse_polynomial(s, kY12); }

TEST(Rational, ParsePrintRoundTrip) {
  EXPECT_EQ(rational_to_string(parse_rational("3/6")), "1/2");
  EXPECT_EQ(rational_to_string(parse_rational("-4/2")), "-2");
  EXPECT_EQ(rational_to_string(Rational(0)), "0");
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
  EXPECT_THROW(parse_rational("x"), ParseError);
}

TEST(Polynomial, AddExample) {
  EXPECT_EQ(P1("y1") + P1("y1"), P1("2*y1"));
}

TEST(Polynomial, MulExample) {
  EXPECT_EQ(P1("y1 + 1") * P1("y1 - 1"), P1("y1^2 - 1"));
}

TEST(Polynomial, ZeroAnnihilates) {
  const Polynomial z(1);
  EXPECT_EQ(z * P1("3*y1^2 - 1/2"), z);
  EXPECT_TRUE((z * P1("y1")).is_zero());
}

TEST(Polynomial, DerivativeExamples) {
  EXPECT_EQ(P1("y1^2").derivative(0), P1("2*y1"));
  EXPECT_TRUE(P1("1").derivative(0).is_zero());
}

TEST(Derivation, ApplyExamples) {
  Derivation ddy{{P1("1")}};
  EXPECT_EQ(derivation_apply(ddy, P1("y1^2")), P1("2*y1"));
  EXPECT_TRUE(derivation_apply(ddy, P1("1")).is_zero());
  Derivation yddy{{P1("y1")}};
  EXPECT_EQ(derivation_apply(yddy, P1("y1")), P1("y1"));
}

TEST(Derivation, Leibniz) {
  Sampler s(kDefaultSeed);
  for (int t = 0; t < 10; ++t) {
    Derivation v{{s.polynomial(2, 2, 3), s.polynomial(2, 2, 3)}};
    const Polynomial f = s.polynomial(2, 3, 3);
    const Polynomial g = s.polynomial(2, 3, 3);
    EXPECT_EQ(derivation_apply(v, f * g),
              derivation_apply(v, f) * g + f * derivation_apply(v, g));
  }
}

TEST(Derivation, BracketIsDerivation) {
  Sampler s(kDefaultSeed + 1);
  Derivation v{{s.polynomial(2, 2, 2), s.polynomial(2, 2, 2)}};
  Derivation w{{s.polynomial(2, 2, 2), s.polynomial(2, 2, 2)}};
  const Polynomial f = s.polynomial(2, 2, 3);
  EXPECT_EQ(derivation_apply(derivation_bracket(v, w), f),
            derivation_apply(v, derivation_apply(w, f)) -
                derivation_apply(w, derivation_apply(v, f)));
}

TEST(Polynomial, ParserGrammar) {
  EXPECT_EQ(P2("2*y1^3*y2"), Polynomial::monomial(2, {3, 1}, Rational(2)));
  EXPECT_EQ(P2("1/2*y2"), Polynomial::monomial(2, {0, 1}, Rational(1, 2)));
  EXPECT_EQ(P2("-y1 + y2 - 3"),
            -Polynomial::variable(2, 0) + Polynomial::variable(2, 1) -
                Polynomial::constant(2, 3));
  EXPECT_EQ(P2("y1*y1"), Polynomial::monomial(2, {2, 0}, Rational(1)));
  EXPECT_EQ(P2("0"), Polynomial(2));
  EXPECT_EQ(P2("3/4"), Polynomial::constant(2, Rational(3, 4)));
}

TEST(Polynomial, ParserErrors) {
  EXPECT_THROW(P1("y2"), ParseError);
  EXPECT_THROW(P1(""), ParseError);
  EXPECT_THROW(P1("y1 +"), ParseError);
  EXPECT_THROW(P1("y1 & y1"), ParseError);
  EXPECT_THROW(P1("1/0"), ParseError);
}

TEST(Polynomial, PrintParseBitExactRoundTrip) {
  Sampler s(kDefaultSeed + 2);
  for (int t = 0; t < 25; ++t) {
    Polynomial p = s.polynomial(2, 4, 5);
    EXPECT_EQ(parse_polynomial(p.to_string(kY12), kY12), p);
  }
  // denominators survive the trip
  const Polynomial p = P2("-5/3*y1^2*y2^3 + 7/2*y2 - 1/6");
  EXPECT_EQ(parse_polynomial(p.to_string(kY12), kY12), p);
}

TEST(Polynomial, RingLaws) {
  Sampler s(kDefaultSeed + 3);
  for (int t = 0; t < 10; ++t) {
    const Polynomial a = s.polynomial(2, 2, 3), b = s.polynomial(2, 2, 3),
                     c = s.polynomial(2, 2, 3);
    EXPECT_EQ(a * (b * c), (a * b) * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a - a, Polynomial(2));
  }
}

TEST(Polynomial, EvaluateIsRingHomomorphism) {
  Sampler s(kDefaultSeed + 4);
  const std::vector<Rational> pt = {Rational(2, 3), Rational(-1)};
  for (int t = 0; t < 10; ++t) {
    const Polynomial a = s.polynomial(2, 3, 3), b = s.polynomial(2, 3, 3);
    EXPECT_EQ((a * b).evaluate(pt), a.evaluate(pt) * b.evaluate(pt));
    EXPECT_EQ((a + b).evaluate(pt), a.evaluate(pt) + b.evaluate(pt));
  }
}

TEST(Polynomial, GradedOrderWithinDegree) {
  GradedIndexLess less;
  EXPECT_TRUE(less({1, 0}, {0, 1}));
  EXPECT_TRUE(less({2, 0}, {1, 1}));
  EXPECT_TRUE(less({1, 1}, {0, 2}));
  EXPECT_TRUE(less({0, 1}, {2, 0}));  // degree wins
  const auto idx = indices_up_to(2, 2);
  const std::vector<MultiIndex> want = {{0, 0}, {1, 0}, {0, 1},
                                        {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(idx, want);
}

}  // namespace
}  // namespace liejets
