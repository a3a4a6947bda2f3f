#pragma once

// Tuned maps shared by the tests of one binary. Tuning is deterministic, so
// each map is computed once on first use.

#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "circlab/rotation.hpp"

namespace corpus {

using circlab::HighReal;

inline const circlab::TuneResult& tuned(circlab::FamilyKind kind, const std::string& a1,
                                        const std::string& a2, const std::string& target,
                                        int depth) {
  static std::map<std::tuple<int, std::string, std::string, std::string, int>,
                  circlab::TuneResult>
      cache;
  const auto key = std::make_tuple(static_cast<int>(kind), a1, a2, target, depth);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const circlab::MapFamily family{kind, HighReal(a1), HighReal(a2)};
    const auto cf = circlab::cf_expand(circlab::quadratic_irrational(target), depth + 2);
    it = cache.emplace(key, circlab::tune_parameter(family, cf, depth, HighReal("1e-45"))).first;
  }
  return it->second;
}

inline const circlab::TuneResult& golden_arnold(int depth = 22) {
  return tuned(circlab::FamilyKind::arnold, "0.5", "0", "golden", depth);
}

inline const circlab::TuneResult& silver_arnold(int depth = 14) {
  return tuned(circlab::FamilyKind::arnold, "0.5", "0", "silver", depth);
}

inline const circlab::TuneResult& golden_two_harmonic(int depth = 22) {
  return tuned(circlab::FamilyKind::two_harmonic, "0.4", "0.2", "golden", depth);
}

inline HighReal golden() { return (sqrt(HighReal(5)) - 1) / 2; }
inline HighReal silver() { return sqrt(HighReal(2)) - 1; }

// Unit in the last place of x at its own precision.
inline HighReal ulp(const HighReal& x) {
  const long bits = static_cast<long>(mpfr_get_prec(x.backend().data()));
  long e = 0;
  if (x != 0) e = mpfr_get_exp(x.backend().data());
  return ldexp(HighReal(1), static_cast<int>(e - bits));
}

}  // namespace corpus
