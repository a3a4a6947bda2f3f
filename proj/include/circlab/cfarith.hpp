#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "circlab/numerics.hpp"

namespace circlab {

using BigInt = boost::multiprecision::mpz_int;

/// Continued-fraction data of a rotation number rho = [k1, k2, ...] with the
/// conventions p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1.
class ContinuedFraction {
 public:
  /// Levels n = 1..levels() have a partial quotient.
  int levels() const { return static_cast<int>(quotients_.size()); }
  const std::vector<std::int64_t>& quotients() const { return quotients_; }
  /// k_n for 1 <= n <= levels().
  std::int64_t k(int n) const;
  /// Convergent numerator/denominator for -1 <= n <= levels().
  const BigInt& p(int n) const;
  const BigInt& q(int n) const;
  /// q_n and p_n narrowed to 64 bits; throws when they do not fit.
  std::int64_t q64(int n) const;
  std::int64_t p64(int n) const;
  /// Delta_n = |q_n rho - p_n| for -1 <= n <= levels().
  const HighReal& delta(int n) const;
  const std::vector<HighReal>& deltas() const { return deltas_; }
  const HighReal& value() const { return value_; }

  /// Builds convergents and errors from given quotients, with rho = `value`.
  static ContinuedFraction from_quotients(std::vector<std::int64_t> quotients,
                                          const HighReal& value);

 private:
  std::vector<std::int64_t> quotients_;
  std::vector<BigInt> p_;
  std::vector<BigInt> q_;
  std::vector<HighReal> deltas_;
  HighReal value_;
};

/// Exact expansion of the working-precision number rho to N levels. Levels
/// beyond the first Delta_n < 10^-(P-10) are refused.
ContinuedFraction cf_expand(const HighReal& rho, int levels);

/// Delta_{-1}..Delta_N.
std::vector<HighReal> deltas(const ContinuedFraction& cf);

/// [k1, ..., kN] evaluated as a finite continued fraction (= p_N / q_N).
HighReal value_of(const std::vector<std::int64_t>& quotients);

struct DiophantineEstimate {
  HighReal delta_hat;
  /// per_level[n - 1] = max(0, log Delta_n / log Delta_{n-1} - 1), n = 1..N.
  std::vector<HighReal> per_level;
  int window_first = 0;
  int window_last = 0;
};

/// Per-level exponents delta_n solving Delta_{n-1}^{1 + delta_n} = Delta_n and
/// their maximum over the tail window [window_first, N] (default
/// window_first = max(2, N/2)).
DiophantineEstimate estimate_diophantine_class(const ContinuedFraction& cf,
                                               int window_first = -1);

/// Purely periodic continued fraction [w, w, w, ...] as a quadratic surd.
HighReal periodic_value(const std::vector<std::int64_t>& word);

/// "golden", "silver", or a comma-separated periodic word such as "1,2".
HighReal quadratic_irrational(const std::string& kind);

std::string quotients_to_string(const std::vector<std::int64_t>& quotients);

}  // namespace circlab
