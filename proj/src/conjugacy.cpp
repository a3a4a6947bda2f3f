#include "circlab/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace circlab {
namespace {

// Slot j of the sorted samples with positions[j] <= x < positions[j+1]
// (cyclically); returns the last slot when x precedes the first sample.
std::size_t cell_of(const std::vector<HighReal>& positions, const HighReal& x) {
  auto it = std::upper_bound(positions.begin(), positions.end(), x);
  if (it == positions.begin()) return positions.size() - 1;
  return static_cast<std::size_t>(it - positions.begin()) - 1;
}

// Width of cell j, closing the circle after the last sample.
HighReal cell_width(const std::vector<HighReal>& positions, std::size_t j) {
  if (j + 1 < positions.size()) return positions[j + 1] - positions[j];
  return positions.front() + 1 - positions[j];
}

void require_samples(const ConjugacyProfile& p, std::size_t at_least) {
  if (p.size() < at_least) {
    throw PreconditionError("too_few_samples", "profile needs at least " +
                                                   std::to_string(at_least) + " samples");
  }
}

}  // namespace

HighReal ConjugacyProfile::gamma_at(const HighReal& x_in) const {
  const HighReal x = mod1(x_in).position();
  const std::size_t j = cell_of(positions, x);
  const std::size_t k = (j + 1) % positions.size();
  HighReal offset = x - positions[j];
  if (offset < 0) offset += 1;
  const HighReal width = cell_width(positions, j);
  return gamma[j] + (gamma[k] - gamma[j]) * offset / width;
}

HighReal ConjugacyProfile::density_at(const HighReal& x) const {
  return exp(gamma_at(x)) / normalization;
}

HighReal ConjugacyProfile::max_gamma_gap() const {
  HighReal gap = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    HighReal g = abs(gamma[(j + 1) % size()] - gamma[j]);
    if (g > gap) gap = g;
  }
  return gap;
}

HighReal ConjugacyProfile::max_spacing() const {
  HighReal gap = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    HighReal w = cell_width(positions, j);
    if (w > gap) gap = w;
  }
  return gap;
}

ConjugacyProfile gamma_on_orbit(const CircleMap& map, const CirclePoint& xi0, std::int64_t n,
                                std::int64_t cap) {
  const Orbit orb = orbit(map, xi0, n, cap);
  const auto count = static_cast<std::size_t>(n) + 1;
  std::vector<HighReal> reduced(count);
  for (std::size_t i = 0; i < count; ++i) reduced[i] = mod1(orb.points()[i]).position();
  std::vector<std::int64_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::int64_t a, std::int64_t b) { return reduced[a] < reduced[b]; });

  ConjugacyProfile p;
  p.orbit_length = n;
  p.orbit_index = order;
  p.slot_of_index.resize(count);
  p.positions.reserve(count);
  p.gamma.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto i = static_cast<std::size_t>(order[j]);
    p.slot_of_index[i] = static_cast<std::int64_t>(j);
    p.positions.push_back(reduced[i]);
    p.gamma.push_back(-orb.log_prefix(static_cast<std::int64_t>(i)));
  }
  p.base_slot = p.slot_of_index[0];
  for (std::size_t j = 1; j < count; ++j) {
    if (p.positions[j] == p.positions[j - 1]) {
      throw InvariantError("periodic_orbit", "orbit revisits a sample point");
    }
  }
  return p;
}

void build_density(ConjugacyProfile& p) {
  require_samples(p, 1000);
  CompensatedSum z;
  std::vector<HighReal> e(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) e[j] = exp(p.gamma[j]);
  for (std::size_t j = 0; j < p.size(); ++j) {
    z += (e[j] + e[(j + 1) % p.size()]) / 2 * cell_width(p.positions, j);
  }
  p.normalization = z.value();
  p.h.resize(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) p.h[j] = e[j] / p.normalization;
}

void build_phi(ConjugacyProfile& p) {
  if (p.h.size() != p.size()) {
    throw PreconditionError("density_missing", "build_phi needs the density first");
  }
  const std::size_t n = p.size();
  p.phi.assign(n, HighReal(0));
  CompensatedSum acc;
  const auto base = static_cast<std::size_t>(p.base_slot);
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t prev = (base + step - 1) % n;
    const std::size_t cur = (base + step) % n;
    const HighReal increment = (p.h[prev] + p.h[cur]) / 2 * cell_width(p.positions, prev);
    if (increment <= 0) {
      throw InvariantError("non_monotone_phi", "cumulative density failed to increase");
    }
    acc += increment;
    p.phi[cur] = acc.value();
  }
}

ConjugacyProfile profile_from_density(std::vector<HighReal> positions, std::vector<HighReal> h) {
  if (positions.size() != h.size()) {
    throw PreconditionError("size_mismatch", "positions and density differ in length");
  }
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
  ConjugacyProfile p;
  p.orbit_length = static_cast<std::int64_t>(positions.size()) - 1;
  for (std::size_t j : order) {
    if (h[j] <= 0) throw PreconditionError("non_positive_density", "density must be positive");
    p.positions.push_back(mod1(positions[j]).position());
    p.gamma.push_back(log(h[j]));
    p.orbit_index.push_back(static_cast<std::int64_t>(j));
  }
  p.slot_of_index.resize(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    p.slot_of_index[static_cast<std::size_t>(p.orbit_index[j])] = static_cast<std::int64_t>(j);
  }
  p.base_slot = 0;
  build_density(p);
  build_phi(p);
  return p;
}

HighReal density_integral(const ConjugacyProfile& p) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const HighReal& a = p.gamma[j];
    const HighReal& b = p.gamma[(j + 1) % p.size()];
    const HighReal w = cell_width(p.positions, j);
    if (a == b) {
      acc += w * exp(a);
    } else {
      acc += w * (exp(b) - exp(a)) / (b - a);
    }
  }
  return acc.value() / p.normalization;
}

HighReal homological_residual(const CircleMap& map, const ConjugacyProfile& p, int grid) {
  if (grid < 1) throw PreconditionError("bad_grid", "grid must be positive");
  HighReal sup = 0;
  for (int g = 0; g < grid; ++g) {
    const HighReal x = HighReal(g) / grid;
    const HighReal r = abs(p.density_at(map.lift(x)) * map.d1(x) - p.density_at(x));
    if (r > sup) sup = r;
  }
  return sup;
}

HighReal commutation_residual(const ConjugacyProfile& p, const HighReal& rho) {
  if (p.phi.size() != p.size()) {
    throw PreconditionError("phi_missing", "commutation residual needs phi");
  }
  HighReal sup = 0;
  for (std::int64_t i = 0; i < p.orbit_length; ++i) {
    const auto a = static_cast<std::size_t>(p.slot_of_index[static_cast<std::size_t>(i)]);
    const auto b = static_cast<std::size_t>(p.slot_of_index[static_cast<std::size_t>(i + 1)]);
    HighReal d = p.phi[b] - p.phi[a] - rho;
    d -= floor(d + HighReal("0.5"));
    if (abs(d) > sup) sup = abs(d);
  }
  return sup;
}

HighReal verify_measure_identity(const CircleMap& map, const ContinuedFraction& cf,
                                 const ConjugacyProfile& p, int n, int grid) {
  if (n < 0 || n > cf.levels()) {
    throw PreconditionError("level_out_of_range", "measure identity level unavailable");
  }
  const std::int64_t qn = cf.q64(n);
  const std::int64_t pn = cf.p64(n);
  const int sign = n % 2 == 0 ? 1 : -1;
  CompensatedSum acc;
  for (int g = 0; g < grid; ++g) {
    const HighReal x = HighReal(g) / grid;
    acc += (iterate(map, x, qn) - pn - x) * sign * p.density_at(x);
  }
  return abs(acc.value() / grid - cf.delta(n));
}

HolderEstimate holder_exponent(const ConjugacyProfile& profile, int base_points, int first_scale,
                               int last_scale) {
  require_samples(profile, 16);
  ConjugacyProfile with_phi;
  if (profile.phi.size() != profile.size()) {
    with_phi = profile;
    build_phi(with_phi);
  }
  const ConjugacyProfile& p = with_phi.size() ? with_phi : profile;
  if (last_scale <= 0) {
    const double floor = 4 * p.max_spacing().convert_to<double>();
    last_scale = static_cast<int>(std::floor(std::log2(1 / floor)));
  }
  if (last_scale - first_scale + 1 < 4) {
    throw PreconditionError("too_few_scales", "sample resolution leaves fewer than 4 scales");
  }

  // The pair scan runs in double: only differences of O(1) quantities at
  // resolved scales enter.
  const std::size_t n = p.size();
  std::vector<double> pos(n), h(n);
  for (std::size_t j = 0; j < n; ++j) {
    pos[j] = p.positions[j].convert_to<double>();
    h[j] = p.h[j].convert_to<double>();
  }
  // phi measured from the first sorted sample is monotone in the slot.
  std::vector<HighReal> phi_from_first(n);
  for (std::size_t j = 0; j < n; ++j) {
    phi_from_first[j] = mod1(p.phi[j] - p.phi[0]).position();
  }
  std::vector<std::size_t> bases;
  for (int b = 0; b < base_points; ++b) {
    const HighReal target = HighReal(b) / base_points;
    auto it = std::lower_bound(phi_from_first.begin(), phi_from_first.end(), target);
    std::size_t j = it == phi_from_first.end() ? n - 1
                                               : static_cast<std::size_t>(it - phi_from_first.begin());
    if (j > 0 && abs(phi_from_first[j - 1] - target) < abs(phi_from_first[j] - target)) --j;
    bases.push_back(j);
  }

  std::vector<double> sup(static_cast<std::size_t>(last_scale + 1), 0.0);
  std::vector<bool> seen(sup.size(), false);
  for (std::size_t b : bases) {
    for (std::size_t j = 0; j < n; ++j) {
      double d = std::abs(pos[j] - pos[b]);
      d = std::min(d, 1 - d);
      if (d <= 0) continue;
      const int scale = static_cast<int>(std::floor(std::log2(1 / d)));
      if (scale < first_scale || scale > last_scale) continue;
      const auto s = static_cast<std::size_t>(scale);
      seen[s] = true;
      sup[s] = std::max(sup[s], std::abs(h[j] - h[b]));
    }
  }

  HolderEstimate est;
  std::vector<std::pair<HighReal, HighReal>> points;
  bool all_zero = true;
  for (int s = first_scale; s <= last_scale; ++s) {
    if (!seen[static_cast<std::size_t>(s)]) continue;
    const HighReal r = pow(HighReal(2), -s);
    const HighReal osc = sup[static_cast<std::size_t>(s)];
    est.scales.push_back({r, osc});
    if (osc > 0) {
      all_zero = false;
      points.emplace_back(r, osc);
    }
  }
  if (all_zero && !est.scales.empty()) {
    est.flat = true;
    est.exponent = 0;
    return est;
  }
  if (points.size() < 4) {
    throw PreconditionError("too_few_scales", "fewer than 4 usable Hoelder scales");
  }
  est.exponent = loglog_slope(points);
  est.lipschitz_or_better = est.exponent >= 1;
  return est;
}

std::string profile_csv(const ConjugacyProfile& p) {
  std::ostringstream out;
  out << "xi,gamma,h,phi\n";
  for (std::size_t j = 0; j < p.size(); ++j) {
    out << to_decimal(p.positions[j]) << ',' << to_decimal(p.gamma[j]) << ','
        << (j < p.h.size() ? to_decimal(p.h[j]) : std::string()) << ','
        << (j < p.phi.size() ? to_decimal(p.phi[j]) : std::string()) << '\n';
  }
  return out.str();
}

std::string holder_scan_text(const HolderEstimate& est) {
  std::ostringstream out;
  for (const auto& s : est.scales) {
    out << to_decimal(s.radius) << ' ' << to_decimal(s.oscillation) << '\n';
  }
  return out.str();
}

}  // namespace circlab
