#include "circlab/partitions.hpp"

#include <algorithm>
#include <sstream>

namespace circlab {
namespace {

void require_orbit(const Orbit& orb, std::int64_t needed, int level) {
  if (orb.length() < needed) {
    throw ResourceError("orbit_too_short", "level " + std::to_string(level) + " needs " +
                                               std::to_string(needed) +
                                               " iterates, orbit has " +
                                               std::to_string(orb.length()));
  }
}

// Sort segments by circle position and return the consecutive gaps.
std::vector<HighReal> circular_gaps(std::vector<const Segment*> segs) {
  std::vector<std::pair<HighReal, const Segment*>> keyed;
  keyed.reserve(segs.size());
  for (const Segment* s : segs) keyed.emplace_back(s->start_point().position(), s);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<HighReal> gaps;
  gaps.reserve(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    const auto& cur = keyed[i];
    const auto& nxt = keyed[(i + 1) % keyed.size()];
    HighReal next_start = nxt.first;
    if (i + 1 == keyed.size()) next_start += 1;
    gaps.push_back(next_start - (cur.first + cur.second->length));
  }
  return gaps;
}

}  // namespace

Orbit orbit_for_level(const CircleMap& map, const ContinuedFraction& cf, int n,
                      const CirclePoint& xi0, std::int64_t cap) {
  return orbit(map, xi0, cf.q64(n + 1) + cf.q64(n), cap);
}

Segment fundamental_segment(const Orbit& orb, const ContinuedFraction& cf, int n,
                            std::int64_t i) {
  const std::int64_t qn = cf.q64(n);
  require_orbit(orb, i + qn, n);
  const HighReal& a = orb.point(i);
  HighReal b = orb.point(i + qn, cf.p64(n));
  Segment s;
  s.level = n;
  s.index = i;
  if (n % 2 == 0) {
    s.length = b - a;
    s.start = a;
  } else {
    s.length = a - b;
    s.start = std::move(b);
  }
  return s;
}

DynamicalPartition build_partition(std::shared_ptr<const Orbit> orb, const ContinuedFraction& cf,
                                   int n) {
  if (n < 0) throw PreconditionError("bad_level", "partition level must be >= 0");
  require_orbit(*orb, cf.q64(n + 1) + cf.q64(n) - 1, n);
  DynamicalPartition p;
  p.level = n;
  const std::int64_t major = cf.q64(n + 1);
  const std::int64_t minor = cf.q64(n);
  p.major.reserve(static_cast<std::size_t>(major));
  p.minor.reserve(static_cast<std::size_t>(minor));
  for (std::int64_t i = 0; i < major; ++i) p.major.push_back(fundamental_segment(*orb, cf, n, i));
  for (std::int64_t i = 0; i < minor; ++i) {
    p.minor.push_back(fundamental_segment(*orb, cf, n + 1, i));
  }
  p.orbit = std::move(orb);
  return p;
}

DynamicalPartition build_partition(const CircleMap& map, const ContinuedFraction& cf, int n,
                                   const CirclePoint& xi0, std::int64_t cap) {
  return build_partition(std::make_shared<const Orbit>(orbit_for_level(map, cf, n, xi0, cap)),
                         cf, n);
}

DisjointnessReport verify_disjointness(const DynamicalPartition& p) {
  const HighReal tol = precision_tolerance(8);
  auto pointers = [](const std::vector<Segment>& v) {
    std::vector<const Segment*> out;
    for (const auto& s : v) out.push_back(&s);
    return out;
  };
  auto min_of = [](const std::vector<HighReal>& v) {
    return v.empty() ? HighReal(0) : *std::min_element(v.begin(), v.end());
  };

  DisjointnessReport report;
  report.min_gap_major = min_of(circular_gaps(pointers(p.major)));
  report.min_gap_minor = min_of(circular_gaps(pointers(p.minor)));
  if (report.min_gap_major < -tol || report.min_gap_minor < -tol) {
    throw InvariantError("overlap", "segments of the level-" + std::to_string(p.level) +
                                        " partition overlap by " +
                                        to_decimal(-std::min(report.min_gap_major,
                                                             report.min_gap_minor), 6));
  }

  auto all = pointers(p.major);
  for (const auto& s : p.minor) all.push_back(&s);
  CompensatedSum total;
  for (const Segment* s : all) total += s->length;
  report.covering_total = total.value();
  report.tiling_mismatch = 0;
  for (const auto& g : circular_gaps(all)) {
    if (abs(g) > report.tiling_mismatch) report.tiling_mismatch = abs(g);
  }
  return report;
}

std::string partition_csv(const DynamicalPartition& p) {
  std::ostringstream out;
  out << "level,index,start,end,length\n";
  for (const auto* group : {&p.major, &p.minor}) {
    for (const auto& s : *group) {
      out << s.level << ',' << s.index << ',' << to_decimal(s.start_point().position()) << ','
          << to_decimal(mod1(s.end()).position()) << ',' << to_decimal(s.length) << '\n';
    }
  }
  return out.str();
}

const HighReal& LengthScales::at(int n) const {
  if (n < -1 || n > max_level()) {
    throw PreconditionError("missing_scale", "l_" + std::to_string(n) + " not computed");
  }
  return values[static_cast<std::size_t>(n + 1)];
}

HighReal length_scale(const Orbit& orb, const ContinuedFraction& cf, int n, int refinement_steps,
                      HighReal* endpoint_value) {
  if (n < 0) return HighReal(1);
  const std::int64_t fine = cf.q64(n + 1);
  require_orbit(orb, fine + cf.q64(n), n);
  std::int64_t best = 0;
  HighReal best_len = 0, widest_parent = 0;
  for (std::int64_t i = 0; i < fine; ++i) {
    Segment s = fundamental_segment(orb, cf, n, i);
    if (s.length > best_len) {
      best_len = s.length;
      best = i;
    }
  }
  for (std::int64_t i = 0; i < cf.q64(n); ++i) {
    Segment s = fundamental_segment(orb, cf, n - 1, i);
    if (s.length > widest_parent) widest_parent = s.length;
  }
  if (endpoint_value) *endpoint_value = best_len;
  if (orb.map().is_rigid() || refinement_steps <= 0) return best_len;

  const std::int64_t qn = cf.q64(n);
  const std::int64_t pn = cf.p64(n);
  const CircleMap& map = orb.map();
  auto displacement = [&](const HighReal& x) -> HighReal {
    return abs(iterate(map, x, qn) - pn - x);
  };
  const HighReal& centre = orb.point(best);
  const HighReal width = best_len + widest_parent;
  auto [x, v] = golden_section_max(displacement, centre - width, centre + width,
                                   refinement_steps);
  return v > best_len ? v : best_len;
}

LengthScales length_scales(const Orbit& orb, const ContinuedFraction& cf, int max_level,
                           int refinement_steps) {
  LengthScales scales;
  scales.values.emplace_back(1);
  scales.endpoint_values.emplace_back(1);
  for (int n = 0; n <= max_level; ++n) {
    HighReal endpoint;
    scales.values.push_back(length_scale(orb, cf, n, refinement_steps, &endpoint));
    scales.endpoint_values.push_back(endpoint);
  }
  return scales;
}

BigInt count_r(const Orbit& orb, const ContinuedFraction& cf, int n, int m) {
  if (m < 0) throw PreconditionError("bad_level", "count_r needs m >= 0");
  const HighReal tol = precision_tolerance(8);
  const Segment base = fundamental_segment(orb, cf, n, 0);
  const std::int64_t count_to = cf.q64(n + m + 1);
  require_orbit(orb, count_to - 1 + cf.q64(n + m), n + m);
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < count_to; ++i) {
    const Segment s = fundamental_segment(orb, cf, n + m, i);
    HighReal offset = mod1(s.start - base.start).position();
    if (offset > 1 - tol) offset -= 1;
    if (offset >= -tol && offset + s.length <= base.length + tol) ++count;
  }
  return BigInt(count);
}

BigInt r_recurrence(const ContinuedFraction& cf, int n, int m) {
  if (m < 0) throw PreconditionError("bad_level", "r_recurrence needs m >= 0");
  BigInt older = 1;
  if (m == 0) return older;
  BigInt newer = cf.k(n + 2);
  for (int j = 2; j <= m; ++j) {
    BigInt next = newer * cf.k(n + j + 1) + older;
    older = std::move(newer);
    newer = std::move(next);
  }
  return newer;
}

StatementABReport verify_statement_A_B(const Orbit& orb, const ContinuedFraction& cf,
                                       const LengthScales& scales, int n_max) {
  if (n_max < 2) throw PreconditionError("too_few_levels", "statement A/B check needs n_max >= 2");
  require_orbit(orb, cf.q64(n_max + 1) + cf.q64(n_max), n_max);
  StatementABReport r;
  r.a_sup = 0;
  for (int n = 0; n <= n_max; ++n) {
    const std::int64_t qn = cf.q64(n);
    HighReal sup = 0;
    for (std::int64_t i = 0; i < cf.q64(n + 1); ++i) {
      HighReal v = abs(log_iterate_derivative(orb, i, qn));
      if (v > sup) sup = v;
    }
    if (sup > r.a_sup) r.a_sup = sup;
    r.a_values.push_back(sup);
  }

  std::vector<HighReal> base_lengths;
  for (int n = 0; n <= n_max; ++n) {
    base_lengths.push_back(fundamental_segment(orb, cf, n, 0).length);
  }
  for (int m = 0; m <= n_max; ++m) r.b_ratios.push_back(base_lengths[m] / base_lengths[0]);
  r.lambda_hat = geometric_rate(r.b_ratios);

  r.segment_ratio_constant = 1;
  r.scale_ratio_constant = 0;
  r.scale_decay_constant = 0;
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 1; n + m <= n_max; ++m) {
      const HighReal seg_ratio = base_lengths[n + m] / base_lengths[n];
      const HighReal scale_ratio = scales.at(n + m) / scales.at(n);
      const HighReal c5 = seg_ratio / scale_ratio;
      if (c5 > r.scale_ratio_constant) r.scale_ratio_constant = c5;
      const HighReal c7 = scale_ratio / pow(r.lambda_hat, m);
      if (c7 > r.scale_decay_constant) r.scale_decay_constant = c7;
      for (std::int64_t j = 1; j < cf.q64(n + 1); ++j) {
        const HighReal ratio = fundamental_segment(orb, cf, n + m, j).length /
                               fundamental_segment(orb, cf, n, j).length / seg_ratio;
        const HighReal spread = ratio > 1 ? ratio : 1 / ratio;
        if (spread > r.segment_ratio_constant) r.segment_ratio_constant = spread;
      }
    }
  }
  return r;
}

}  // namespace circlab
