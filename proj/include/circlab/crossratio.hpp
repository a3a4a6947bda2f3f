#pragma once

#include <functional>
#include <optional>
#include <string>

#include "circlab/numerics.hpp"

namespace circlab {

struct FourPoints {
  HighReal x1, x2, x3, x4;

  /// max - min of the four coordinates.
  HighReal spread() const;
};

/// Strictly increasing C^{2+alpha} function on [lo, hi] together with its first
/// two derivatives.
struct SmoothFunction {
  std::string name;
  std::function<HighReal(const HighReal&)> f;
  std::function<HighReal(const HighReal&)> d1;
  std::function<HighReal(const HighReal&)> d2;
  HighReal alpha{1};
  HighReal lo;
  HighReal hi;

  bool in_domain(const HighReal& x) const { return x >= lo && x <= hi; }
};

namespace test_functions {
SmoothFunction affine(const HighReal& slope, const HighReal& offset);
/// x -> -1/(x + 2), an increasing Moebius map on (-2, inf).
SmoothFunction mobius();
SmoothFunction square();
SmoothFunction exponential();
/// x + a sin(2 pi x) / (2 pi), increasing for |a| < 1.
SmoothFunction sine_perturbed(const HighReal& a);
}  // namespace test_functions

/// A point together with its image and, optionally, the derivative there. The
/// derivative is consulted only when two arguments of a distortion coincide.
struct PointImage {
  HighReal x;
  HighReal fx;
  std::optional<HighReal> dfx;
};

PointImage image_of(const HighReal& x, const SmoothFunction& f);

/// Difference quotient (f(a) - f(b)) / (a - b); f'(a) when a == b.
HighReal slope(const PointImage& a, const PointImage& b);

HighReal cross_ratio(const FourPoints& p);

/// D(x1, x2, x3; f) from precomputed images.
HighReal ratio_distortion(const PointImage& a, const PointImage& b, const PointImage& c);
HighReal ratio_distortion(const HighReal& x1, const HighReal& x2, const HighReal& x3,
                          const SmoothFunction& f);

HighReal cross_ratio_distortion(const PointImage& a, const PointImage& b,
                                const PointImage& c, const PointImage& d);
HighReal cross_ratio_distortion(const FourPoints& p, const SmoothFunction& f);

/// [D - 1 - (x1 - x3) f''/(2 f')] / (|x1 - x3| spread^alpha), f', f'' taken at
/// `eval_point`.
HighReal dr_expansion_residual(const HighReal& x1, const HighReal& x2, const HighReal& x3,
                               const SmoothFunction& f, const HighReal& eval_point);

/// |log Dist| / (|x1 - x3| spread^alpha).
HighReal dist_bound_residual(const FourPoints& p, const SmoothFunction& f);

}  // namespace circlab
