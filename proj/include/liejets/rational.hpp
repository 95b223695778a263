#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "liejets/errors.hpp"

namespace liejets {

using Integer = boost::multiprecision::cpp_int;
// Always stored in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Accepts "p", "-p", "p/q" with integer p, q (q > 0 after normalization).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty())
      throw ParseError("malformed rational literal: " + s);
    Integer d(den);
    if (d == 0) throw ParseError("zero denominator: " + s);
    return Rational(Integer(num), d);
  } catch (const std::runtime_error&) {
    throw ParseError("malformed rational literal: " + s);
  }
}

}  // namespace liejets
