#include "circlab/maps.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace circlab {
namespace {

void sin_cos(const HighReal& x, HighReal& s, HighReal& c) {
  mpfr_sin_cos(s.backend().data(), c.backend().data(), x.backend().data(), MPFR_RNDN);
}

HighReal one_third() { return HighReal(1) / 3; }

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::rotation:
      return "rotation";
    case FamilyKind::arnold:
      return "arnold";
    case FamilyKind::two_harmonic:
      return "two_harmonic";
  }
  return "unknown";
}

FamilyKind parse_family(const std::string& name) {
  if (name == "rotation") return FamilyKind::rotation;
  if (name == "arnold") return FamilyKind::arnold;
  if (name == "two_harmonic") return FamilyKind::two_harmonic;
  throw PreconditionError("unknown_family", "unknown map family '" + name + "'");
}

CircleMap::CircleMap(FamilyKind family, HighReal t, HighReal a1, HighReal a2)
    : family_(family),
      t_(std::move(t)),
      a1_(std::move(a1)),
      a2_(std::move(a2)),
      two_pi_(circlab::two_pi()),
      precision_(working_precision()) {}

HighReal CircleMap::lift(const HighReal& x) const {
  HighReal y = x + t_;
  if (a1_ != 0) y += a1_ * sin(two_pi_ * x) / two_pi_;
  if (a2_ != 0) y += a2_ * sin(2 * two_pi_ * x + one_third()) / (2 * two_pi_);
  return y;
}

HighReal CircleMap::d1(const HighReal& x) const {
  HighReal d = 1;
  if (a1_ != 0) d += a1_ * cos(two_pi_ * x);
  if (a2_ != 0) d += a2_ * cos(2 * two_pi_ * x + one_third());
  return d;
}

HighReal CircleMap::d2(const HighReal& x) const {
  HighReal d = 0;
  if (a1_ != 0) d -= two_pi_ * a1_ * sin(two_pi_ * x);
  if (a2_ != 0) d -= 2 * two_pi_ * a2_ * sin(2 * two_pi_ * x + one_third());
  return d;
}

HighReal CircleMap::log_d1(const HighReal& x) const {
  if (is_rigid()) return HighReal(0);
  return log(d1(x));
}

void CircleMap::lift_and_log_d1(const HighReal& x, HighReal& image,
                                HighReal& log_derivative) const {
  if (is_rigid()) {
    image = x + t_;
    log_derivative = 0;
    return;
  }
  HighReal s, c;
  sin_cos(two_pi_ * x, s, c);
  image = x + t_ + a1_ * s / two_pi_;
  HighReal d = 1 + a1_ * c;
  if (a2_ != 0) {
    HighReal s2, c2;
    sin_cos(2 * two_pi_ * x + one_third(), s2, c2);
    image += a2_ * s2 / (2 * two_pi_);
    d += a2_ * c2;
  }
  log_derivative = log(d);
}

CircleMap CircleMap::with_shift(const HighReal& t) const {
  CircleMap copy = *this;
  copy.t_ = t;
  return copy;
}

std::string CircleMap::descriptor() const {
  std::ostringstream out;
  out << "family=" << to_string(family_) << " t=" << to_decimal(t_);
  switch (family_) {
    case FamilyKind::rotation:
      break;
    case FamilyKind::arnold:
      out << " a=" << to_decimal(a1_);
      break;
    case FamilyKind::two_harmonic:
      out << " a1=" << to_decimal(a1_) << " a2=" << to_decimal(a2_);
      break;
  }
  return out.str();
}

CircleMap make_rotation(const HighReal& rho) {
  if (rho <= 0 || rho >= 1) {
    throw PreconditionError("rho_out_of_range", "rotation angle must lie in (0, 1)");
  }
  return CircleMap(FamilyKind::rotation, rho, HighReal(0), HighReal(0));
}

CircleMap make_arnold(const HighReal& t, const HighReal& a) {
  if (abs(a) >= 1) {
    throw PreconditionError("not_diffeomorphism",
                            "Arnold map with |a| >= 1 is not a diffeomorphism");
  }
  return CircleMap(FamilyKind::arnold, t, a, HighReal(0));
}

CircleMap make_two_harmonic(const HighReal& t, const HighReal& a1, const HighReal& a2) {
  CircleMap map(FamilyKind::two_harmonic, t, a1, a2);
  if (min_derivative(map) <= 0) {
    throw PreconditionError("not_diffeomorphism",
                            "two-harmonic coefficients give a non-positive derivative");
  }
  return map;
}

HighReal min_derivative(const CircleMap& map) {
  constexpr int grid = 1 << 14;
  // Scan in double, then refine at working precision around the minimum.
  const double a1 = map.a1().convert_to<double>();
  const double a2 = map.a2().convert_to<double>();
  const double tp = 2 * M_PI;
  int best = 0;
  double best_value = INFINITY;
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double d = 1 + a1 * std::cos(tp * x) + a2 * std::cos(2 * tp * x + 1.0 / 3.0);
    if (d < best_value) {
      best_value = d;
      best = i;
    }
  }
  const HighReal step = HighReal(1) / grid;
  auto neg = [&](const HighReal& x) -> HighReal { return -map.d1(x); };
  auto [x, v] = golden_section_max(neg, step * (best - 1), step * (best + 1), 60);
  HighReal at_grid = map.d1(step * best);
  return -v < at_grid ? HighReal(-v) : at_grid;
}

CircleMap parse_descriptor(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, std::string> fields;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("bad_descriptor", "malformed descriptor token '" + token + "'");
    }
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto need = [&](const std::string& key) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw PreconditionError("bad_descriptor", "descriptor lacks '" + key + "'");
    }
    return parse_real(it->second);
  };
  if (!fields.count("family")) {
    throw PreconditionError("bad_descriptor", "descriptor lacks 'family'");
  }
  switch (parse_family(fields["family"])) {
    case FamilyKind::rotation:
      return make_rotation(need("t"));
    case FamilyKind::arnold:
      return make_arnold(need("t"), need("a"));
    case FamilyKind::two_harmonic:
      return make_two_harmonic(need("t"), need("a1"), need("a2"));
  }
  throw PreconditionError("bad_descriptor", "unreachable family");
}

Orbit orbit(const CircleMap& map, const CirclePoint& xi0, std::int64_t length,
            std::int64_t cap) {
  if (length < 0) throw PreconditionError("negative_length", "orbit length must be >= 0");
  if (length > cap) {
    throw ResourceError("orbit_cap", "orbit of length " + std::to_string(length) +
                                         " exceeds the cap " + std::to_string(cap));
  }
  require_precision(map.precision(), "circle map");
  Orbit orb(map);
  const auto n = static_cast<std::size_t>(length);
  orb.points_.reserve(n + 1);
  orb.log_prefix_.reserve(n + 1);
  orb.points_.push_back(xi0.position());
  orb.log_prefix_.emplace_back(0);
  CompensatedSum acc;
  HighReal next, ld;
  for (std::size_t i = 0; i < n; ++i) {
    map.lift_and_log_d1(orb.points_[i], next, ld);
    acc += ld;
    orb.points_.push_back(next);
    orb.log_prefix_.push_back(acc.value());
  }
  return orb;
}

HighReal log_iterate_derivative(const Orbit& orb, std::int64_t i, std::int64_t n) {
  if (i < 0 || n < 0 || i + n > orb.length()) {
    throw PreconditionError("index_out_of_range", "iterate_derivative window outside orbit");
  }
  return orb.log_prefix(i + n) - orb.log_prefix(i);
}

HighReal iterate_derivative(const Orbit& orb, std::int64_t i, std::int64_t n) {
  return exp(log_iterate_derivative(orb, i, n));
}

HighReal iterate(const CircleMap& map, HighReal x, std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) x = map.lift(x);
  return x;
}

}  // namespace circlab
