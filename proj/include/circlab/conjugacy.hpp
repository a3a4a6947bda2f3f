#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circlab/cfarith.hpp"
#include "circlab/maps.hpp"

namespace circlab {

/// Invariant density h = e^gamma / Z and conjugacy phi = int_{xi_0} h sampled
/// along a finite orbit, sorted by circle position. gamma is interpolated
/// piecewise linearly with periodic closure; h is exp of that interpolant.
struct ConjugacyProfile {
  std::int64_t orbit_length = 0;
  std::vector<HighReal> positions;  // sorted, in [0, 1)
  std::vector<HighReal> gamma;
  /// Orbit index of each sorted sample, and the sorted slot of each orbit index.
  std::vector<std::int64_t> orbit_index;
  std::vector<std::int64_t> slot_of_index;
  /// Slot of the marked point xi_0.
  std::int64_t base_slot = 0;

  HighReal normalization;  // Z
  std::vector<HighReal> h;
  /// phi in [0, 1), zero at xi_0; empty until build_phi.
  std::vector<HighReal> phi;

  std::size_t size() const { return positions.size(); }
  HighReal gamma_at(const HighReal& x) const;
  HighReal density_at(const HighReal& x) const;
  /// Largest |gamma| jump and largest spacing between circle neighbours.
  HighReal max_gamma_gap() const;
  HighReal max_spacing() const;
};

/// gamma(xi_0) = 0, gamma(xi_{i+1}) = gamma(xi_i) - log T'(xi_i), i < N.
ConjugacyProfile gamma_on_orbit(const CircleMap& map, const CirclePoint& xi0, std::int64_t n,
                                std::int64_t cap = kDefaultOrbitCap);

/// Z by the trapezoid rule over the sorted samples, then h = e^gamma / Z.
void build_density(ConjugacyProfile& profile);

/// Cumulative trapezoid of h starting at xi_0. Throws InvariantError if the
/// cumulative sums fail to increase.
void build_phi(ConjugacyProfile& profile);

/// Density samples taken directly from a given function (synthetic profiles).
ConjugacyProfile profile_from_density(std::vector<HighReal> positions, std::vector<HighReal> h);

/// Integral of exp(interpolated gamma) / Z computed exactly per cell.
HighReal density_integral(const ConjugacyProfile& profile);

/// sup over a uniform grid of |h(T xi) T'(xi) - h(xi)|.
HighReal homological_residual(const CircleMap& map, const ConjugacyProfile& profile, int grid);

/// sup over the orbit of the distance from phi(xi_{i+1}) - phi(xi_i) - rho to Z.
HighReal commutation_residual(const ConjugacyProfile& profile, const HighReal& rho);

/// |int (T^{q_n} xi - xi - p_n)(-1)^n h(xi) dxi - Delta_n| by the trapezoid
/// rule on a uniform grid.
HighReal verify_measure_identity(const CircleMap& map, const ContinuedFraction& cf,
                                 const ConjugacyProfile& profile, int n, int grid = 4096);

struct HolderScale {
  HighReal radius;       // r_j = 2^-j
  HighReal oscillation;  // sup |h(xi) - h(xi_0)| over r_{j+1} < |xi - xi_0| <= r_j
};

struct HolderEstimate {
  HighReal exponent;
  /// Envelope identically zero: h constant at the sampled scales.
  bool flat = false;
  /// Exponent >= 1: Lipschitz or better at the sampled scales.
  bool lipschitz_or_better = false;
  std::vector<HolderScale> scales;
};

/// Sup-envelope of the oscillation of h on dyadic annuli around `base_points`
/// points equidistributed in phi, followed by a log-log fit. Scales run from
/// 2^-first_scale down to the resolution floor (4x the largest spacing) unless
/// last_scale > 0 caps them.
HolderEstimate holder_exponent(const ConjugacyProfile& profile, int base_points = 32,
                               int first_scale = 3, int last_scale = 0);

std::string profile_csv(const ConjugacyProfile& profile);
std::string holder_scan_text(const HolderEstimate& estimate);

}  // namespace circlab
