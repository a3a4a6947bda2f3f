#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "circlab/cfarith.hpp"
#include "circlab/maps.hpp"

namespace circlab {

/// Fundamental segment Delta^(level)_index = T^index Delta^(level)_0, held as
/// its left endpoint on the lift and its (positive) length.
struct Segment {
  int level = 0;
  std::int64_t index = 0;
  HighReal start;
  HighReal length;

  HighReal end() const { return start + length; }
  CirclePoint start_point() const { return mod1(start); }
};

/// Orbit xi_0..xi_N long enough to hold every endpoint of the level-n
/// partition, N = q_{n+1} + q_n.
Orbit orbit_for_level(const CircleMap& map, const ContinuedFraction& cf, int n,
                      const CirclePoint& xi0, std::int64_t cap = kDefaultOrbitCap);

/// [xi, T^{q_n} xi] for even n, [T^{q_n} xi, xi] for odd n, at xi = xi_i.
Segment fundamental_segment(const Orbit& orb, const ContinuedFraction& cf, int n,
                            std::int64_t i);

struct DynamicalPartition {
  int level = 0;
  std::shared_ptr<const Orbit> orbit;
  /// Delta^(n)_i, 0 <= i < q_{n+1}.
  std::vector<Segment> major;
  /// Delta^(n+1)_i, 0 <= i < q_n.
  std::vector<Segment> minor;
};

DynamicalPartition build_partition(std::shared_ptr<const Orbit> orb, const ContinuedFraction& cf,
                                   int n);
DynamicalPartition build_partition(const CircleMap& map, const ContinuedFraction& cf, int n,
                                   const CirclePoint& xi0, std::int64_t cap = kDefaultOrbitCap);

struct DisjointnessReport {
  /// Smallest gap between consecutive same-level segments (negative = overlap).
  HighReal min_gap_major;
  HighReal min_gap_minor;
  /// Total length q_{n+1} Delta_n + q_n Delta_{n+1} for a rotation; the union
  /// tiles the circle.
  HighReal covering_total;
  /// Largest |gap| between consecutive segments of the union.
  HighReal tiling_mismatch;
};

/// Sort-and-scan disjointness check. Throws InvariantError("overlap") when two
/// same-level segments overlap by more than 1e-(P-8).
DisjointnessReport verify_disjointness(const DynamicalPartition& p);

/// Partition table with columns level,index,start,end,length.
std::string partition_csv(const DynamicalPartition& p);

/// l_{-1}..l_{max_level}, l_{-1} = 1.
struct LengthScales {
  std::vector<HighReal> values;
  /// Lengths read off the partition endpoints before refinement.
  std::vector<HighReal> endpoint_values;

  int max_level() const { return static_cast<int>(values.size()) - 2; }
  const HighReal& at(int n) const;
};

/// l_n = max_xi |T^{q_n} xi - xi|: maximum over the level-n partition
/// segments, refined by golden-section search around the best endpoint.
HighReal length_scale(const Orbit& orb, const ContinuedFraction& cf, int n,
                      int refinement_steps = 30, HighReal* endpoint_value = nullptr);

/// Scales for levels -1..max_level from one orbit.
LengthScales length_scales(const Orbit& orb, const ContinuedFraction& cf, int max_level,
                           int refinement_steps = 30);

/// Number of 0 <= i < q_{n+m+1} with Delta^(n+m)_i inside Delta^(n)_0, by
/// direct endpoint containment.
BigInt count_r(const Orbit& orb, const ContinuedFraction& cf, int n, int m);

/// r(n,n) = 1, r(n+1,n) = k_{n+2}, r(n+m,n) = r(n+m-1,n) k_{n+m+1} + r(n+m-2,n).
BigInt r_recurrence(const ContinuedFraction& cf, int n, int m);

struct StatementABReport {
  /// sup_i |log (T^{q_n})'(xi_i)| over 0 <= i < q_{n+1}, for n = 0..n_max.
  std::vector<HighReal> a_values;
  HighReal a_sup;
  /// |Delta^(m)_0| / |Delta^(0)_0| for m = 0..n_max and its geometric rate.
  std::vector<HighReal> b_ratios;
  HighReal lambda_hat;
  /// Empirical constants of the bounded-distortion lemmas.
  HighReal segment_ratio_constant;  // max ratio of |D^(n+m)_j||D^(n)_0| / (|D^(n+m)_0||D^(n)_j|)
  HighReal scale_ratio_constant;    // max (|D^(n+m)_0|/|D^(n)_0|) / (l_{n+m}/l_n)
  HighReal scale_decay_constant;    // max (l_{n+m}/l_n) / lambda_hat^m
};

StatementABReport verify_statement_A_B(const Orbit& orb, const ContinuedFraction& cf,
                                       const LengthScales& scales, int n_max);

}  // namespace circlab
