#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "circlab/cfarith.hpp"
#include "circlab/maps.hpp"

namespace circlab {

enum class RotationMethod { birkhoff, dynamical_cf };

struct RotationEstimate {
  HighReal value;
  RotationMethod method;
  int levels = 0;
  HighReal residual;
};

/// (L^N(0) - 0) / N reduced to [0, 1), with error bound 1/N.
RotationEstimate rotation_number_birkhoff(const CircleMap& map, std::int64_t n,
                                          std::int64_t cap = kDefaultOrbitCap);

/// Extracts partial quotients from the order of the dynamical convergents
/// xi_{q_n}: k_{n+1} counts the points xi_{q_{n-1} + k q_n}, k >= 1, that stay
/// inside the fundamental segment Delta^(n-1)_0. The orbit is extended lazily.
class QuotientScanner {
 public:
  QuotientScanner(const CircleMap& map, const CirclePoint& xi0,
                  std::int64_t cap = kDefaultOrbitCap);

  struct Step {
    /// Number of returns found; when `capped` it is a lower bound (> limit).
    std::int64_t k = 0;
    bool capped = false;
  };

  /// Computes the next partial quotient. With a finite `limit`, scanning stops
  /// as soon as more than `limit` returns were seen. Without a limit, a
  /// non-advancing return throws InvariantError("periodic_orbit").
  Step next(std::optional<std::int64_t> limit = std::nullopt);

  int level() const { return static_cast<int>(quotients_.size()); }
  const std::vector<std::int64_t>& quotients() const { return quotients_; }
  std::int64_t orbit_length() const { return static_cast<std::int64_t>(points_.size()) - 1; }

 private:
  const HighReal& point(std::int64_t index);
  // xi_{index} - winding - xi_0 on the lift.
  HighReal displacement(std::int64_t index, std::int64_t winding);

  CircleMap map_;
  std::int64_t cap_;
  std::vector<HighReal> points_;
  std::vector<std::int64_t> quotients_;
  std::int64_t q_prev_ = 0, q_cur_ = 1;
  std::int64_t p_prev_ = 1, p_cur_ = 0;
  HighReal floor_;
};

/// Dynamical partial quotients k_1..k_{max_level}. The returned value() is the
/// last convergent p_N / q_N.
ContinuedFraction partial_quotients_dynamical(const CircleMap& map, int max_level,
                                              const CirclePoint& xi0,
                                              std::int64_t cap = kDefaultOrbitCap);

/// A one-parameter family t -> T_t with rotation number nondecreasing in t.
struct MapFamily {
  FamilyKind kind = FamilyKind::arnold;
  HighReal a1{0};
  HighReal a2{0};

  /// Validates the amplitudes once; the returned map is the family at t = 0.
  CircleMap base() const;
};

enum class Ordering { below, match, above };

/// Compares rho(map) with the target by the first `depth` quotients.
Ordering compare_prefix(const CircleMap& map, const ContinuedFraction& target, int depth,
                        std::int64_t cap = kDefaultOrbitCap);

struct TuneResult {
  CircleMap map;
  HighReal t;
  /// Verified dynamical quotients (exactly the target prefix).
  ContinuedFraction verified;
  /// p_depth / q_depth and the bound 1/(q_depth q_{depth+1}) on |rho - rho_est|.
  HighReal rho_estimate;
  HighReal rho_bound;
  int bisection_steps = 0;
};

/// Bisection on t in [0, 1] using quotient-prefix ordering. Stops when the
/// midpoint reproduces `depth` quotients of the target or the bracket is
/// narrower than `tol` (the latter is an error: the prefix could not be met).
TuneResult tune_parameter(const MapFamily& family, const ContinuedFraction& target, int depth,
                          const HighReal& tol, std::int64_t cap = kDefaultOrbitCap);

}  // namespace circlab
