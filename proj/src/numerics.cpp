#include "circlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>

namespace circlab {

PrecisionScope::PrecisionScope(unsigned digits) : saved_(HighReal::default_precision()) {
  if (digits < kFastPrecision) {
    throw PreconditionError("precision", "precision must be at least 17 digits");
  }
  HighReal::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { HighReal::default_precision(saved_); }

unsigned working_precision() { return HighReal::default_precision(); }

void require_precision(unsigned digits, const char* what) {
  if (digits != working_precision()) {
    throw PreconditionError("precision_mismatch",
                            std::string(what) + " was built at " + std::to_string(digits) +
                                " digits but the working precision is " +
                                std::to_string(working_precision()));
  }
}

HighReal ten_to_minus(int exponent) {
  return boost::multiprecision::pow(HighReal(10), -exponent);
}

HighReal precision_tolerance(int slack) {
  return ten_to_minus(static_cast<int>(working_precision()) - slack);
}

HighReal pi() { return boost::math::constants::pi<HighReal>(); }

HighReal two_pi() { return 2 * pi(); }

std::string to_decimal(const HighReal& x) {
  return x.str(0, std::ios_base::scientific);
}

std::string to_decimal(const HighReal& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

HighReal parse_real(const std::string& text) {
  try {
    HighReal x(text);
    if (!is_finite(x)) throw std::runtime_error("non-finite");
    return x;
  } catch (const std::exception&) {
    throw PreconditionError("bad_number", "cannot parse real number '" + text + "'");
  }
}

bool is_finite(const HighReal& x) { return boost::multiprecision::isfinite(x); }

CirclePoint mod1(const HighReal& x) {
  if (!is_finite(x)) {
    throw PreconditionError("non_finite", "mod1 of a non-finite value");
  }
  HighReal r = x - floor(x);
  // floor can leave exactly 1 after rounding of tiny negative inputs.
  if (r >= 1) r -= 1;
  return CirclePoint(std::move(r));
}

HighReal oriented_distance(const CirclePoint& from, const CirclePoint& to) {
  return mod1(to.position() - from.position()).position();
}

HighReal circle_distance(const CirclePoint& a, const CirclePoint& b) {
  HighReal d = oriented_distance(a, b);
  HighReal other = 1 - d;
  return d < other ? d : other;
}

CompensatedSum& CompensatedSum::operator+=(const HighReal& x) {
  if (!is_finite(x)) {
    throw PreconditionError("non_finite", "compensated sum of a non-finite term");
  }
  HighReal t = sum_ + x;
  if (abs(sum_) >= abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = std::move(t);
  return *this;
}

HighReal compensated_sum(std::span<const HighReal> xs) {
  CompensatedSum acc;
  for (const auto& x : xs) acc += x;
  return acc.value();
}

std::pair<HighReal, HighReal> golden_section_max(
    const std::function<HighReal(const HighReal&)>& f, HighReal lo, HighReal hi,
    int steps) {
  const HighReal inv_phi = (sqrt(HighReal(5)) - 1) / 2;
  HighReal c = hi - inv_phi * (hi - lo);
  HighReal d = lo + inv_phi * (hi - lo);
  HighReal fc = f(c);
  HighReal fd = f(d);
  for (int i = 0; i < steps; ++i) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  if (fc > fd) return {c, fc};
  return {d, fd};
}

Maximum maximize_on_circle(const std::function<HighReal(const CirclePoint&)>& f,
                           int grid_size, int refinement_steps) {
  if (grid_size < 8) {
    throw PreconditionError("grid_too_small", "maximize_on_circle needs grid_size >= 8");
  }
  const HighReal step = HighReal(1) / grid_size;
  int best = 0;
  HighReal best_value = f(mod1(HighReal(0)));
  for (int i = 1; i < grid_size; ++i) {
    HighReal v = f(mod1(step * i));
    if (v > best_value) {
      best_value = std::move(v);
      best = i;
    }
  }
  auto on_line = [&](const HighReal& x) { return f(mod1(x)); };
  auto [x, v] = golden_section_max(on_line, step * (best - 1), step * (best + 1),
                                   refinement_steps);
  if (v < best_value) return {mod1(step * best), best_value};
  return {mod1(x), v};
}

HighReal linear_slope(std::span<const std::pair<HighReal, HighReal>> points) {
  if (points.size() < 2) {
    throw PreconditionError("too_few_points", "linear fit needs at least 2 points");
  }
  const auto n = static_cast<long>(points.size());
  HighReal mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  HighReal sxy = 0, sxx = 0;
  for (const auto& [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) {
    throw PreconditionError("degenerate_fit", "all abscissae coincide");
  }
  return sxy / sxx;
}

HighReal loglog_slope(std::span<const std::pair<HighReal, HighReal>> points) {
  if (points.size() < 3) {
    throw PreconditionError("too_few_points", "loglog_slope needs at least 3 points");
  }
  std::vector<std::pair<HighReal, HighReal>> logs;
  logs.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (x <= 0 || y <= 0) {
      throw PreconditionError("non_positive", "loglog_slope needs positive coordinates");
    }
    logs.emplace_back(log(x), log(y));
  }
  return linear_slope(logs);
}

HighReal geometric_rate(std::span<const HighReal> values) {
  std::vector<std::pair<HighReal, HighReal>> pts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0) {
      throw PreconditionError("non_positive", "geometric fit needs positive values");
    }
    pts.emplace_back(HighReal(static_cast<long>(i)), log(values[i]));
  }
  return exp(linear_slope(pts));
}

}  // namespace circlab
