#pragma once

#include <cstdint>
#include <vector>

#include "circlab/cfarith.hpp"
#include "circlab/maps.hpp"
#include "circlab/partitions.hpp"

namespace circlab {

/// eps_n = l_{n-1}^a + (l_n/l_{n-1}) l_{n-2}^a + ... + (l_n/l_0) l_{-1}^a.
HighReal epsilon(const LengthScales& scales, const HighReal& alpha, int n);

struct EpsilonSequence {
  /// eps_0..eps_N.
  std::vector<HighReal> eps;
  /// k_{n+1} eps_n.
  std::vector<HighReal> kn_eps;
  /// Delta_n^{alpha / (1 + delta)}.
  std::vector<HighReal> diophantine_bound;
  /// max_n eps_n / Delta_n^{alpha/(1+delta)} over n >= 1.
  HighReal diophantine_constant;
};

EpsilonSequence epsilon_sequence(const LengthScales& scales, const ContinuedFraction& cf,
                                 const HighReal& alpha, const HighReal& delta_hat);

struct DenjoyLevel {
  int n = 0;
  /// sup |log (T^{q_n})'(xi)| over the sampled orbit points.
  HighReal s_n;
  HighReal eps_n;
  HighReal ratio;          // s_n / eps_n
  HighReal naive_ratio;    // s_n / l_{n-1}^alpha, the uncorrected normalization
};

/// Samples xi_i for `sample_count` indices spread over 0 <= i < q_{n+1}
/// (all of them when sample_count >= q_{n+1}).
DenjoyLevel denjoy_check(const Orbit& orb, const ContinuedFraction& cf,
                         const LengthScales& scales, int n, std::int64_t sample_count);

struct MKProfile {
  int n = 0;
  std::vector<std::pair<HighReal, HighReal>> m_samples;  // (xi, M_n(xi)) on Delta^(n-1)_0
  std::vector<std::pair<HighReal, HighReal>> k_samples;  // (xi, K_n(xi)) on Delta^(n-2)_0
  /// Positive root of M_n(xi_0) M_n(xi_{q_{n-1}}).
  HighReal m_n;
  /// max M / min M - 1 and max K / min K - 1.
  HighReal m_oscillation;
  HighReal k_oscillation;
  /// Oscillations divided by l_{n-1}^alpha and l_n^alpha.
  HighReal m_normalized;
  HighReal k_normalized;
  /// max |log Dist(xi_0, xi, xi_{q_{n-1}}, eta; T^{q_n})| / l_{n-1}^alpha.
  HighReal dist_normalized;
};

/// Chebyshev-spaced samples including both endpoints (`samples` >= 3).
MKProfile mk_profile(const Orbit& orb, const ContinuedFraction& cf, const LengthScales& scales,
                     int n, int samples = 17);

struct ExactRelationResiduals {
  HighReal product;     // M_n(x0) M_n(x_{q_{n-1}}) - K_n(x0) K_n(x_{q_n})
  HighReal shift;       // K_{n+1}(x_{q_{n-1}}) - 1 - ratio (M_n(x_{q_{n+1}}) - 1)
  HighReal derivative;  // (T^{q_{n+1}})'/M_{n+1} - 1 - ratio (1 - (T^{q_n})'/K_{n+1})

  HighReal max_abs() const;
};

/// Residuals of the three exact M_n/K_n relations at level n. A nonzero
/// `perturbation` moves the argument xi_{q_n} of K_n off the orbit (negative
/// control).
ExactRelationResiduals verify_exact_relations(const Orbit& orb, const ContinuedFraction& cf,
                                              int n, const HighReal& perturbation = HighReal(0));

struct DecayReport {
  int first_level = 1;
  std::vector<HighReal> kn_eps;         // k_{n+1} eps_n, n = first_level..
  HighReal rate;                        // geometric fit
  std::vector<HighReal> refined_ratio;  // k_{n+1} eps_n / Delta_{n-1}^{alpha - delta}
  HighReal refined_spread;              // max / min of refined_ratio
};

DecayReport verify_kneps_decay(const EpsilonSequence& eps, const ContinuedFraction& cf,
                               const HighReal& alpha, const HighReal& delta_hat, int first_level,
                               int n_max);

struct DenjoyRow {
  int n = 0;
  BigInt q_n;
  HighReal delta_n, l_n, eps_n, s_n, ratio, naive_ratio, kn_eps;
  ExactRelationResiduals residuals;
};

struct DenjoyReport {
  std::vector<DenjoyRow> rows;
  HighReal delta_hat;
  HighReal max_residual;
  HighReal ratio_spread;   // max/min of s_n/eps_n
  HighReal s_rate;         // geometric rate of s_n
  DecayReport decay;
  HighReal diophantine_constant;
  StatementABReport statements;
};

/// Levels 1..n_max for one map. `cf` supplies quotients (which must match the
/// map's dynamics) and Delta_n.
DenjoyReport denjoy_report(const CircleMap& map, const ContinuedFraction& cf, int n_max,
                           std::int64_t sample_count, const CirclePoint& xi0,
                           std::int64_t cap = kDefaultOrbitCap);

}  // namespace circlab
