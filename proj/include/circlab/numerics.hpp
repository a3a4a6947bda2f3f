#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Default working precision in decimal digits; must agree in every
// translation unit that includes Boost's MPFR wrapper.
#ifndef BOOST_MULTIPRECISION_MPFR_DEFAULT_PRECISION
#define BOOST_MULTIPRECISION_MPFR_DEFAULT_PRECISION 50
#endif
#include <boost/multiprecision/mpfr.hpp>

#include "circlab/errors.hpp"

namespace circlab {

/// Real scalar with a run-time configurable number of significant decimal
/// digits. All orbit-level quantities are held in this type.
/// Expression templates are disabled: they re-associate compound updates and
/// can hold references to temporaries, both fatal to compensated sums.
using HighReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultPrecision = 50;
inline constexpr unsigned kFastPrecision = 17;

/// RAII guard fixing the process-wide working precision (decimal digits).
/// Values created inside the scope carry that precision.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

unsigned working_precision();

/// Throws PreconditionError if `digits` differs from the working precision.
void require_precision(unsigned digits, const char* what);

/// 10^(-exponent) at the working precision.
HighReal ten_to_minus(int exponent);

/// Tolerance of the form 1e-(P - slack) used by identity checks.
HighReal precision_tolerance(int slack);

HighReal pi();
HighReal two_pi();

/// Decimal rendering with enough digits to round-trip at the value's precision.
std::string to_decimal(const HighReal& x);
/// Fixed number of significant digits (used for human-oriented output).
std::string to_decimal(const HighReal& x, int digits);
HighReal parse_real(const std::string& text);

bool is_finite(const HighReal& x);

// ---------------------------------------------------------------------------
// Circle arithmetic

/// Representative of a point of R/Z, always in [0, 1).
class CirclePoint {
 public:
  CirclePoint() = default;
  const HighReal& position() const { return position_; }

 private:
  friend CirclePoint mod1(const HighReal& x);
  explicit CirclePoint(HighReal p) : position_(std::move(p)) {}
  HighReal position_{0};
};

CirclePoint mod1(const HighReal& x);

/// Counterclockwise distance from `from` to `to`, in [0, 1).
HighReal oriented_distance(const CirclePoint& from, const CirclePoint& to);

/// Shortest distance on the circle, in [0, 1/2].
HighReal circle_distance(const CirclePoint& a, const CirclePoint& b);

/// Positively oriented arc from start to end.
struct Arc {
  CirclePoint start;
  CirclePoint end;

  HighReal length() const { return oriented_distance(start, end); }
  bool contains(const CirclePoint& p) const {
    return oriented_distance(start, p) <= length();
  }
};

// ---------------------------------------------------------------------------
// Accumulation

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;

  CompensatedSum& operator+=(const HighReal& x);
  HighReal value() const { return sum_ + compensation_; }

 private:
  HighReal sum_{0};
  HighReal compensation_{0};
};

HighReal compensated_sum(std::span<const HighReal> xs);

// ---------------------------------------------------------------------------
// Optimization and regression

struct Maximum {
  CirclePoint point;
  HighReal value;
};

/// Golden-section search for a maximum of `f` on [lo, hi] (real line).
std::pair<HighReal, HighReal> golden_section_max(
    const std::function<HighReal(const HighReal&)>& f, HighReal lo, HighReal hi,
    int steps);

/// Grid scan of the circle followed by golden-section refinement in the
/// bracket around the best grid point.
Maximum maximize_on_circle(const std::function<HighReal(const CirclePoint&)>& f,
                           int grid_size, int refinement_steps);

/// Least-squares slope of y against x.
HighReal linear_slope(std::span<const std::pair<HighReal, HighReal>> points);

/// Least-squares slope of log y against log x.
HighReal loglog_slope(std::span<const std::pair<HighReal, HighReal>> points);

/// exp of the least-squares slope of log(values[i]) against i: the
/// per-step factor of a geometric fit.
HighReal geometric_rate(std::span<const HighReal> values);

}  // namespace circlab
