#pragma once

#include <cassert>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "liejets/errors.hpp"
#include "liejets/multi_index.hpp"
#include "liejets/rational.hpp"

namespace liejets {

inline std::vector<std::string> default_var_names(int m) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(m));
  for (int i = 1; i <= m; ++i) names.push_back("y" + std::to_string(i));
  return names;
}

// Sparse exact polynomial over Q in a fixed number of variables.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational, GradedIndexLess>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) { assert(nvars >= 0); }

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.set_coeff(MultiIndex(static_cast<size_t>(nvars), 0), c);
    return p;
  }

  static Polynomial variable(int nvars, int i) {
    assert(i >= 0 && i < nvars);
    Polynomial p(nvars);
    p.set_coeff(unit_index(nvars, i), Rational(1));
    return p;
  }

  static Polynomial monomial(int nvars, const MultiIndex& a, const Rational& c) {
    assert(static_cast<int>(a.size()) == nvars);
    Polynomial p(nvars);
    p.set_coeff(a, c);
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Rational coeff(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational constant_term() const {
    return coeff(MultiIndex(static_cast<size_t>(nvars_), 0));
  }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && is_zero_index(terms_.begin()->first));
  }

  int total_degree() const {  // -1 for the zero polynomial
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, degree(a));
    return d;
  }

  void set_coeff(const MultiIndex& a, const Rational& c) {
    assert(static_cast<int>(a.size()) == nvars_);
    if (c == 0)
      terms_.erase(a);
    else
      terms_[a] = c;
  }

  void add_term(const MultiIndex& a, const Rational& c) {
    assert(static_cast<int>(a.size()) == nvars_);
    auto it = terms_.find(a);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(a, c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) {
    assert(nvars_ == o.nvars_);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    assert(nvars_ == o.nvars_);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r(a.nvars_);
    for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    assert(a.nvars_ == b.nvars_);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(index_add(ma, mb), ca * cb);
    return r;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator*(const Rational& c, const Polynomial& a) {
    Polynomial r(a.nvars_);
    if (c == 0) return r;
    for (const auto& [m, t] : a.terms_) r.terms_.emplace(m, c * t);
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Rational& c) { return c * a; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial derivative(int var) const {
    assert(var >= 0 && var < nvars_);
    Polynomial r(nvars_);
    for (const auto& [a, c] : terms_) {
      const int e = a[static_cast<size_t>(var)];
      if (e == 0) continue;
      MultiIndex b = a;
      b[static_cast<size_t>(var)] = e - 1;
      r.add_term(b, c * e);
    }
    return r;
  }

  Rational evaluate(const std::vector<Rational>& point) const {
    assert(static_cast<int>(point.size()) == nvars_);
    Rational total(0);
    for (const auto& [a, c] : terms_) {
      Rational t = c;
      for (size_t i = 0; i < a.size(); ++i)
        for (int k = 0; k < a[i]; ++k) t *= point[i];
      total += t;
    }
    return total;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    assert(static_cast<int>(names.size()) == nvars_);
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [a, c] : terms_) {
      std::string mono;
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[i];
        if (a[i] != 1) mono += "^" + std::to_string(a[i]);
      }
      std::string term;
      if (mono.empty()) {
        term = rational_to_string(c);
      } else if (c == 1) {
        term = mono;
      } else if (c == -1) {
        term = "-" + mono;
      } else {
        term = rational_to_string(c) + "*" + mono;
      }
      if (first) {
        out = term;
        first = false;
      } else if (!term.empty() && term[0] == '-') {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    }
    return out;
  }

  std::string to_string() const { return to_string(default_var_names(nvars_)); }

 private:
  int nvars_;
  TermMap terms_;
};

namespace detail {

struct PolyLexer {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string number() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ParseError("expected number at offset " + std::to_string(pos));
    return std::string(text.substr(start, pos - start));
  }
  std::string identifier() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos)
      throw ParseError("expected variable name at offset " + std::to_string(pos));
    return std::string(text.substr(start, pos - start));
  }
};

}  // namespace detail

// Grammar: poly := ['+'|'-'] term (('+'|'-') term)*
//          term := factor ('*' factor)*
//          factor := number ['/' number] | name ['^' number]
inline Polynomial parse_polynomial(std::string_view text,
                                   const std::vector<std::string>& names) {
  const int nvars = static_cast<int>(names.size());
  detail::PolyLexer lex{text};
  Polynomial result(nvars);
  if (lex.done()) throw ParseError("empty polynomial");
  bool negative = false;
  if (lex.consume('-'))
    negative = true;
  else
    lex.consume('+');
  while (true) {
    Rational coeff(1);
    MultiIndex mono(static_cast<size_t>(nvars), 0);
    bool saw_factor = false;
    while (true) {
      const char c = lex.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        const std::string num = lex.number();
        if (lex.consume('/')) {
          const std::string den = lex.number();
          coeff *= parse_rational(num + "/" + den);
        } else {
          coeff *= parse_rational(num);
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::string name = lex.identifier();
        int var = -1;
        for (int i = 0; i < nvars; ++i)
          if (names[static_cast<size_t>(i)] == name) var = i;
        if (var < 0) throw ParseError("unknown variable: " + name);
        int exp = 1;
        if (lex.consume('^')) exp = std::stoi(lex.number());
        mono[static_cast<size_t>(var)] += exp;
      } else {
        throw ParseError("unexpected character in polynomial at offset " +
                         std::to_string(lex.pos));
      }
      saw_factor = true;
      if (!lex.consume('*')) break;
    }
    if (!saw_factor) throw ParseError("empty term");
    result.add_term(mono, negative ? -coeff : coeff);
    if (lex.done()) break;
    if (lex.consume('+'))
      negative = false;
    else if (lex.consume('-'))
      negative = true;
    else
      throw ParseError("expected '+' or '-' at offset " + std::to_string(lex.pos));
    if (lex.done()) throw ParseError("trailing sign in polynomial");
  }
  return result;
}

// Vector field sum_j comps[j] * d/dy_j acting on polynomials.
struct Derivation {
  std::vector<Polynomial> comps;

  int nvars() const { return static_cast<int>(comps.size()); }

  friend bool operator==(const Derivation& a, const Derivation& b) {
    return a.comps == b.comps;
  }
};

inline Polynomial derivation_apply(const Derivation& v, const Polynomial& f) {
  assert(v.nvars() == f.nvars());
  Polynomial out(f.nvars());
  for (int j = 0; j < f.nvars(); ++j) {
    if (v.comps[static_cast<size_t>(j)].is_zero()) continue;
    out += v.comps[static_cast<size_t>(j)] * f.derivative(j);
  }
  return out;
}

inline Derivation derivation_zero(int m) {
  Derivation v;
  v.comps.assign(static_cast<size_t>(m), Polynomial(m));
  return v;
}

// Commutator [v, w] = v.w - w.v as a vector field.
inline Derivation derivation_bracket(const Derivation& v, const Derivation& w) {
  assert(v.nvars() == w.nvars());
  const int m = v.nvars();
  Derivation out = derivation_zero(m);
  for (int j = 0; j < m; ++j) {
    out.comps[static_cast<size_t>(j)] =
        derivation_apply(v, w.comps[static_cast<size_t>(j)]) -
        derivation_apply(w, v.comps[static_cast<size_t>(j)]);
  }
  return out;
}

}  // namespace liejets
