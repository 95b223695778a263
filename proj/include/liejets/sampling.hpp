#pragma once

#include <cassert>
#include <cstdint>
#include <random>

#include "liejets/multi_index.hpp"
#include "liejets/polynomial.hpp"
#include "liejets/rational.hpp"

namespace liejets {

inline constexpr std::uint64_t kDefaultSeed = 20260816ull;

// Deterministic sampler: the engine is pinned and every distribution is
// hand-rolled, so identical seeds give identical draws on every platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  int range(int lo, int hi) {  // inclusive bounds, rejection-sampled
    assert(hi >= lo);
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    while (true) {
      const std::uint64_t v = eng_();
      if (v <= limit - 1) return lo + static_cast<int>(v % span);
    }
  }

  Rational rational(int num_bound = 6, int den_bound = 3) {
    const int num = range(-num_bound, num_bound);
    const int den = range(1, den_bound);
    return Rational(num, den);
  }

  Rational nonzero_rational(int num_bound = 6, int den_bound = 3) {
    while (true) {
      Rational r = rational(num_bound, den_bound);
      if (r != 0) return r;
    }
  }

  MultiIndex index(int d, int maxdeg) {
    const auto all = indices_up_to(d, maxdeg);
    return all[static_cast<size_t>(range(0, static_cast<int>(all.size()) - 1))];
  }

  Polynomial polynomial(int nvars, int maxdeg = 2, int terms = 3) {
    Polynomial p(nvars);
    for (int t = 0; t < terms; ++t) p.add_term(index(nvars, maxdeg), rational());
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace liejets
