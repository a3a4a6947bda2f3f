#include "circlab/crossratio.hpp"

#include <algorithm>

namespace circlab {

HighReal FourPoints::spread() const {
  HighReal lo = x1, hi = x1;
  for (const HighReal* x : {&x2, &x3, &x4}) {
    if (*x < lo) lo = *x;
    if (*x > hi) hi = *x;
  }
  return hi - lo;
}

namespace test_functions {

SmoothFunction affine(const HighReal& slope, const HighReal& offset) {
  if (slope <= 0) throw PreconditionError("not_increasing", "affine slope must be positive");
  return {"affine",
          [slope, offset](const HighReal& x) -> HighReal { return slope * x + offset; },
          [slope](const HighReal&) -> HighReal { return slope; },
          [](const HighReal&) -> HighReal { return HighReal(0); },
          HighReal(1),
          HighReal(-100),
          HighReal(100)};
}

SmoothFunction mobius() {
  return {"mobius",
          [](const HighReal& x) -> HighReal { return -1 / (x + 2); },
          [](const HighReal& x) -> HighReal { return 1 / ((x + 2) * (x + 2)); },
          [](const HighReal& x) -> HighReal { return -2 / ((x + 2) * (x + 2) * (x + 2)); },
          HighReal(1),
          HighReal(-1),
          HighReal(10)};
}

SmoothFunction square() {
  return {"square",
          [](const HighReal& x) -> HighReal { return x * x; },
          [](const HighReal& x) -> HighReal { return 2 * x; },
          [](const HighReal&) -> HighReal { return HighReal(2); },
          HighReal(1),
          HighReal("0.001"),
          HighReal(10)};
}

SmoothFunction exponential() {
  return {"exp",
          [](const HighReal& x) -> HighReal { return exp(x); },
          [](const HighReal& x) -> HighReal { return exp(x); },
          [](const HighReal& x) -> HighReal { return exp(x); },
          HighReal(1),
          HighReal(-5),
          HighReal(5)};
}

SmoothFunction sine_perturbed(const HighReal& a) {
  if (abs(a) >= 1) {
    throw PreconditionError("not_increasing", "sine perturbation needs |a| < 1");
  }
  const HighReal tp = two_pi();
  return {"sine",
          [a, tp](const HighReal& x) -> HighReal { return x + a * sin(tp * x) / tp; },
          [a, tp](const HighReal& x) -> HighReal { return 1 + a * cos(tp * x); },
          [a, tp](const HighReal& x) -> HighReal { return -a * tp * sin(tp * x); },
          HighReal(1),
          HighReal(-2),
          HighReal(2)};
}

}  // namespace test_functions

PointImage image_of(const HighReal& x, const SmoothFunction& f) {
  if (!f.in_domain(x)) {
    throw PreconditionError("outside_domain", "point outside the domain of " + f.name);
  }
  return {x, f.f(x), f.d1(x)};
}

HighReal slope(const PointImage& a, const PointImage& b) {
  if (a.x == b.x) {
    if (!a.dfx) {
      throw PreconditionError("coincident_points",
                              "coincident points need a derivative for the limit");
    }
    return *a.dfx;
  }
  return (a.fx - b.fx) / (a.x - b.x);
}

HighReal cross_ratio(const FourPoints& p) {
  HighReal den = (p.x2 - p.x3) * (p.x4 - p.x1);
  if (den == 0) throw PreconditionError("zero_denominator", "cross-ratio denominator vanishes");
  return (p.x1 - p.x2) * (p.x3 - p.x4) / den;
}

HighReal ratio_distortion(const PointImage& a, const PointImage& b, const PointImage& c) {
  return slope(a, b) / slope(b, c);
}

HighReal ratio_distortion(const HighReal& x1, const HighReal& x2, const HighReal& x3,
                          const SmoothFunction& f) {
  return ratio_distortion(image_of(x1, f), image_of(x2, f), image_of(x3, f));
}

HighReal cross_ratio_distortion(const PointImage& a, const PointImage& b,
                                const PointImage& c, const PointImage& d) {
  const bool distinct = a.x != b.x && b.x != c.x && c.x != d.x && d.x != a.x;
  if (distinct) {
    return cross_ratio({a.fx, b.fx, c.fx, d.fx}) / cross_ratio({a.x, b.x, c.x, d.x});
  }
  return ratio_distortion(a, b, c) / ratio_distortion(a, d, c);
}

HighReal cross_ratio_distortion(const FourPoints& p, const SmoothFunction& f) {
  return cross_ratio_distortion(image_of(p.x1, f), image_of(p.x2, f), image_of(p.x3, f),
                                image_of(p.x4, f));
}

HighReal dr_expansion_residual(const HighReal& x1, const HighReal& x2, const HighReal& x3,
                               const SmoothFunction& f, const HighReal& eval_point) {
  const HighReal spread = FourPoints{x1, x2, x3, x1}.spread();
  if (spread == 0) throw PreconditionError("zero_spread", "residual undefined for spread 0");
  const HighReal lo = std::min({x1, x2, x3});
  const HighReal hi = std::max({x1, x2, x3});
  if (eval_point < lo || eval_point > hi) {
    throw PreconditionError("outside_domain", "evaluation point must lie between the points");
  }
  if (x1 == x3) return HighReal(0);
  const HighReal d = ratio_distortion(x1, x2, x3, f);
  const HighReal lead = (x1 - x3) * f.d2(eval_point) / (2 * f.d1(eval_point));
  return abs(d - 1 - lead) / (abs(x1 - x3) * pow(spread, f.alpha));
}

HighReal dist_bound_residual(const FourPoints& p, const SmoothFunction& f) {
  const HighReal spread = p.spread();
  if (spread == 0) throw PreconditionError("zero_spread", "residual undefined for spread 0");
  if (p.x1 == p.x3) return HighReal(0);
  return abs(log(cross_ratio_distortion(p, f))) / (abs(p.x1 - p.x3) * pow(spread, f.alpha));
}

}  // namespace circlab
