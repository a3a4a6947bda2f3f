#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circlab/numerics.hpp"

namespace circlab {

enum class FamilyKind { rotation, arnold, two_harmonic };

std::string to_string(FamilyKind kind);
FamilyKind parse_family(const std::string& name);

inline constexpr std::int64_t kDefaultOrbitCap = 10'000'000;

/// Orientation-preserving circle diffeomorphism given by a degree-one lift
///   x + t + (a1 / 2pi) sin(2 pi x) + (a2 / 4pi) sin(4 pi x + 1/3)
/// which covers the rigid rotation (a1 = a2 = 0), the Arnold family (a2 = 0)
/// and the asymmetric two-harmonic family.
class CircleMap {
 public:
  FamilyKind family() const { return family_; }
  const HighReal& shift() const { return t_; }
  const HighReal& a1() const { return a1_; }
  const HighReal& a2() const { return a2_; }
  /// Hoelder exponent of the second derivative (all families here are analytic).
  const HighReal& alpha() const { return alpha_; }
  unsigned precision() const { return precision_; }
  bool is_rigid() const { return a1_ == 0 && a2_ == 0; }

  HighReal lift(const HighReal& x) const;
  HighReal d1(const HighReal& x) const;
  HighReal d2(const HighReal& x) const;
  HighReal log_d1(const HighReal& x) const;
  /// Lift value and log-derivative at x sharing one trigonometric evaluation.
  void lift_and_log_d1(const HighReal& x, HighReal& image, HighReal& log_derivative) const;

  /// Same family and amplitudes with a different translation parameter.
  CircleMap with_shift(const HighReal& t) const;

  /// `family=arnold t=<decimal> a=<decimal>` and friends; decimals round-trip.
  std::string descriptor() const;

 private:
  friend CircleMap make_rotation(const HighReal& rho);
  friend CircleMap make_arnold(const HighReal& t, const HighReal& a);
  friend CircleMap make_two_harmonic(const HighReal& t, const HighReal& a1, const HighReal& a2);

  CircleMap(FamilyKind family, HighReal t, HighReal a1, HighReal a2);

  FamilyKind family_;
  HighReal t_;
  HighReal a1_;
  HighReal a2_;
  HighReal alpha_{1};
  HighReal two_pi_;
  unsigned precision_;
};

CircleMap make_rotation(const HighReal& rho);
CircleMap make_arnold(const HighReal& t, const HighReal& a);
CircleMap make_two_harmonic(const HighReal& t, const HighReal& a1, const HighReal& a2);

CircleMap parse_descriptor(const std::string& text);

/// Smallest value of T' found by a 2^14-point grid scan plus golden-section
/// refinement around the grid minimum.
HighReal min_derivative(const CircleMap& map);

/// Marked trajectory xi_i = T^i xi_0 stored as lift values, with compensated
/// prefix sums of log T'(xi_i).
class Orbit {
 public:
  const CircleMap& map() const { return map_; }
  const HighReal& base() const { return points_.front(); }
  /// Number of iterates N; points() has N + 1 entries.
  std::int64_t length() const { return static_cast<std::int64_t>(points_.size()) - 1; }
  const std::vector<HighReal>& points() const { return points_; }
  const HighReal& point(std::int64_t i) const { return points_.at(static_cast<std::size_t>(i)); }
  /// Lift value of xi_i translated back by an integer winding.
  HighReal point(std::int64_t i, std::int64_t winding) const { return point(i) - winding; }
  /// log (T^n)'(xi_0) for n = 0..N.
  const HighReal& log_prefix(std::int64_t n) const {
    return log_prefix_.at(static_cast<std::size_t>(n));
  }

 private:
  friend Orbit orbit(const CircleMap&, const CirclePoint&, std::int64_t, std::int64_t);
  Orbit(CircleMap map) : map_(std::move(map)) {}

  CircleMap map_;
  std::vector<HighReal> points_;
  std::vector<HighReal> log_prefix_;
};

Orbit orbit(const CircleMap& map, const CirclePoint& xi0, std::int64_t length,
            std::int64_t cap = kDefaultOrbitCap);

/// (T^n)'(xi_i) from the prefix sums.
HighReal iterate_derivative(const Orbit& orb, std::int64_t i, std::int64_t n);
HighReal log_iterate_derivative(const Orbit& orb, std::int64_t i, std::int64_t n);

/// L_T^n(x) for an arbitrary lift point.
HighReal iterate(const CircleMap& map, HighReal x, std::int64_t n);

}  // namespace circlab
