#include "circlab/rotation.hpp"

namespace circlab {

RotationEstimate rotation_number_birkhoff(const CircleMap& map, std::int64_t n,
                                          std::int64_t cap) {
  if (n < 100) throw PreconditionError("orbit_too_short", "Birkhoff estimate needs N >= 100");
  if (n > cap) throw ResourceError("orbit_cap", "Birkhoff orbit exceeds the cap");
  const HighReal x = iterate(map, HighReal(0), n);
  HighReal value = x / n;
  value -= floor(value);
  return {value, RotationMethod::birkhoff, 0, HighReal(1) / n};
}

QuotientScanner::QuotientScanner(const CircleMap& map, const CirclePoint& xi0,
                                 std::int64_t cap)
    : map_(map), cap_(cap), floor_(precision_tolerance(10)) {
  require_precision(map.precision(), "circle map");
  points_.push_back(xi0.position());
}

const HighReal& QuotientScanner::point(std::int64_t index) {
  if (index > cap_) {
    throw ResourceError("orbit_cap", "dynamical quotient scan at level " +
                                         std::to_string(level() + 1) +
                                         " needs orbit index " + std::to_string(index) +
                                         " beyond the cap " + std::to_string(cap_));
  }
  while (static_cast<std::int64_t>(points_.size()) <= index) {
    points_.push_back(map_.lift(points_.back()));
  }
  return points_[static_cast<std::size_t>(index)];
}

HighReal QuotientScanner::displacement(std::int64_t index, std::int64_t winding) {
  HighReal y = point(index);
  y -= winding;
  y -= points_.front();
  return y;
}

QuotientScanner::Step QuotientScanner::next(std::optional<std::int64_t> limit) {
  const HighReal start = displacement(q_prev_, p_prev_);
  if (abs(start) < floor_) {
    if (limit) return {*limit + 1, true};
    throw InvariantError("periodic_orbit", "fundamental segment at level " +
                                               std::to_string(level() - 1) +
                                               " fell below the precision floor");
  }
  const bool negative = start < 0;
  HighReal previous = start;
  std::int64_t k = 1;
  for (;; ++k) {
    const HighReal y = displacement(q_prev_ + k * q_cur_, p_prev_ + k * p_cur_);
    if (y == 0 || (y < 0) != negative) break;
    if (limit && k > *limit) return {k, true};
    if (!limit && abs(y - previous) < floor_) {
      throw InvariantError("periodic_orbit", "returns stopped advancing at level " +
                                                 std::to_string(level() + 1));
    }
    previous = y;
  }
  const std::int64_t quotient = k - 1;
  if (quotient == 0) {
    if (limit) return {0, false};
    if (level() == 0) {
      throw PreconditionError("rho_out_of_range", "rotation number is not in (0, 1)");
    }
    throw InvariantError("periodic_orbit", "zero partial quotient at level " +
                                               std::to_string(level() + 1));
  }
  quotients_.push_back(quotient);
  const std::int64_t q_next = quotient * q_cur_ + q_prev_;
  const std::int64_t p_next = quotient * p_cur_ + p_prev_;
  q_prev_ = q_cur_;
  q_cur_ = q_next;
  p_prev_ = p_cur_;
  p_cur_ = p_next;
  return {quotient, false};
}

ContinuedFraction partial_quotients_dynamical(const CircleMap& map, int max_level,
                                              const CirclePoint& xi0, std::int64_t cap) {
  QuotientScanner scanner(map, xi0, cap);
  while (scanner.level() < max_level) scanner.next();
  const auto& ks = scanner.quotients();
  return ContinuedFraction::from_quotients(ks, value_of(ks));
}

CircleMap MapFamily::base() const {
  switch (kind) {
    case FamilyKind::rotation:
      return make_arnold(HighReal(0), HighReal(0));
    case FamilyKind::arnold:
      return make_arnold(HighReal(0), a1);
    case FamilyKind::two_harmonic:
      return make_two_harmonic(HighReal(0), a1, a2);
  }
  throw PreconditionError("unknown_family", "unknown family");
}

Ordering compare_prefix(const CircleMap& map, const ContinuedFraction& target, int depth,
                        std::int64_t cap) {
  if (depth > target.levels()) {
    throw PreconditionError("target_too_short", "target has fewer quotients than the depth");
  }
  QuotientScanner scanner(map, mod1(HighReal(0)), cap);
  for (int j = 1; j <= depth; ++j) {
    const std::int64_t want = target.k(j);
    const auto step = scanner.next(want);
    if (!step.capped && step.k == want) continue;
    const bool larger = step.capped || step.k > want;
    // A larger quotient at an odd level means a smaller rotation number.
    const bool odd = j % 2 == 1;
    return larger == odd ? Ordering::below : Ordering::above;
  }
  return Ordering::match;
}

TuneResult tune_parameter(const MapFamily& family, const ContinuedFraction& target, int depth,
                          const HighReal& tol, std::int64_t cap) {
  if (depth < 1 || depth > target.levels()) {
    throw PreconditionError("bad_depth", "tuning depth must be within the target expansion");
  }
  const CircleMap base = family.base();
  const CirclePoint origin = mod1(HighReal(0));
  const std::vector<std::int64_t> prefix(target.quotients().begin(),
                                         target.quotients().begin() + depth);

  auto finish = [&](const HighReal& t, int steps) {
    CircleMap map = base.is_rigid() ? make_rotation(t) : base.with_shift(t);
    ContinuedFraction verified = partial_quotients_dynamical(map, depth, origin, cap);
    if (verified.quotients() != prefix) {
      throw InvariantError("tuning_verification",
                           "tuned map reproduces " + quotients_to_string(verified.quotients()) +
                               " instead of " + quotients_to_string(prefix));
    }
    HighReal q_d = HighReal(verified.q(depth));
    HighReal q_next = q_d + HighReal(verified.q(depth - 1));
    HighReal rho = HighReal(verified.p(depth)) / q_d;
    return TuneResult{map, t, verified, rho, 1 / (q_d * q_next), steps};
  };

  if (base.is_rigid()) return finish(target.value(), 0);

  HighReal lo = 0, hi = 1;
  if (compare_prefix(base.with_shift(lo), target, depth, cap) != Ordering::below ||
      compare_prefix(base.with_shift(hi), target, depth, cap) != Ordering::above) {
    throw PreconditionError("no_bracket", "target rotation number not bracketed by t in [0, 1]");
  }
  int steps = 0;
  while (hi - lo >= tol) {
    HighReal mid = (lo + hi) / 2;
    ++steps;
    switch (compare_prefix(base.with_shift(mid), target, depth, cap)) {
      case Ordering::match:
        return finish(mid, steps);
      case Ordering::below:
        lo = mid;
        break;
      case Ordering::above:
        hi = mid;
        break;
    }
    if (mid == lo && mid == hi) break;
  }
  throw InvariantError("bisection_stagnated",
                       "bisection bracket shrank below tolerance without matching " +
                           std::to_string(depth) + " quotients");
}

}  // namespace circlab
