#include "circlab/denjoy.hpp"

#include <algorithm>
#include <cmath>

#include "circlab/crossratio.hpp"

namespace circlab {
namespace {

// A dynamical convergent xi_j - w held by orbit index and winding.
struct Node {
  std::int64_t index;
  std::int64_t winding;
};

Node convergent(const ContinuedFraction& cf, int n) { return {cf.q64(n), cf.p64(n)}; }

Node sum(Node a, Node b) { return {a.index + b.index, a.winding + b.winding}; }

// Image of an orbit node under the lift T^{q_m} - p_m, with the derivative.
PointImage image(const Orbit& orb, const ContinuedFraction& cf, int m, Node node) {
  const Node target = sum(node, convergent(cf, m));
  return {orb.point(node.index, node.winding), orb.point(target.index, target.winding),
          iterate_derivative(orb, node.index, cf.q64(m))};
}

// Image of an arbitrary lift point (no derivative; never coincides with orbit nodes).
PointImage image(const Orbit& orb, const ContinuedFraction& cf, int m, const HighReal& x) {
  return {x, iterate(orb.map(), x, cf.q64(m)) - cf.p64(m), std::nullopt};
}

HighReal max_of(const std::vector<HighReal>& v) { return *std::max_element(v.begin(), v.end()); }
HighReal min_of(const std::vector<HighReal>& v) { return *std::min_element(v.begin(), v.end()); }

// Chebyshev-Lobatto nodes on [a, b] with the endpoints exact.
std::vector<HighReal> chebyshev_nodes(const HighReal& a, const HighReal& b, int count) {
  std::vector<HighReal> nodes;
  const HighReal mid = (a + b) / 2, half = (b - a) / 2;
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      nodes.push_back(a);
    } else if (k == count - 1) {
      nodes.push_back(b);
    } else {
      nodes.push_back(mid - half * cos(pi() * k / (count - 1)));
    }
  }
  return nodes;
}

// Class exponent over the levels the report covers. Deeper levels of a tuned
// map's quotient prefix carry the truncation of its convergent value.
HighReal diophantine_exponent(const ContinuedFraction& cf, int n_max) {
  const int levels = std::min(cf.levels(), std::max(5, n_max));
  if (levels < 5) return HighReal(0);
  std::vector<std::int64_t> prefix(cf.quotients().begin(), cf.quotients().begin() + levels);
  return estimate_diophantine_class(ContinuedFraction::from_quotients(prefix, cf.value()))
      .delta_hat;
}

}  // namespace

HighReal epsilon(const LengthScales& scales, const HighReal& alpha, int n) {
  if (n < 0 || n > scales.max_level()) {
    throw PreconditionError("missing_scales", "eps_" + std::to_string(n) + " needs l_0..l_n");
  }
  CompensatedSum acc;
  for (int j = 0; j <= n; ++j) {
    acc += scales.at(n) / scales.at(n - j) * pow(scales.at(n - j - 1), alpha);
  }
  return acc.value();
}

EpsilonSequence epsilon_sequence(const LengthScales& scales, const ContinuedFraction& cf,
                                 const HighReal& alpha, const HighReal& delta_hat) {
  EpsilonSequence out;
  out.diophantine_constant = 0;
  for (int n = 0; n <= scales.max_level(); ++n) {
    out.eps.push_back(epsilon(scales, alpha, n));
    out.kn_eps.push_back(out.eps.back() * cf.k(n + 1));
    out.diophantine_bound.push_back(pow(cf.delta(n), alpha / (1 + delta_hat)));
    if (n >= 1) {
      HighReal c = out.eps.back() / out.diophantine_bound.back();
      if (c > out.diophantine_constant) out.diophantine_constant = c;
    }
  }
  return out;
}

DenjoyLevel denjoy_check(const Orbit& orb, const ContinuedFraction& cf,
                         const LengthScales& scales, int n, std::int64_t sample_count) {
  if (sample_count < 1) throw PreconditionError("bad_samples", "sample_count must be >= 1");
  const std::int64_t qn = cf.q64(n);
  const std::int64_t range = cf.q64(n + 1);
  if (orb.length() < range - 1 + qn) {
    throw ResourceError("orbit_too_short", "denjoy_check at level " + std::to_string(n) +
                                               " needs a longer orbit");
  }
  const std::int64_t count = std::min(sample_count, range);
  DenjoyLevel level;
  level.n = n;
  level.s_n = 0;
  for (std::int64_t s = 0; s < count; ++s) {
    const std::int64_t i = s * range / count;
    HighReal v = abs(log_iterate_derivative(orb, i, qn));
    if (v > level.s_n) level.s_n = v;
  }
  level.eps_n = epsilon(scales, orb.map().alpha(), n);
  level.ratio = level.s_n / level.eps_n;
  level.naive_ratio = level.s_n / pow(scales.at(n - 1), orb.map().alpha());
  return level;
}

MKProfile mk_profile(const Orbit& orb, const ContinuedFraction& cf, const LengthScales& scales,
                     int n, int samples) {
  if (n < 1) throw PreconditionError("bad_level", "mk_profile needs n >= 1");
  if (samples < 3) throw PreconditionError("bad_samples", "mk_profile needs >= 3 samples");
  const HighReal floor = precision_tolerance(10);
  const Node origin{0, 0};
  const Node q_prev = convergent(cf, n - 1);
  const Node q_prev2 = convergent(cf, n - 2);
  const Node q_cur = convergent(cf, n);
  const HighReal& alpha = orb.map().alpha();

  MKProfile prof;
  prof.n = n;
  {
    const PointImage a = image(orb, cf, n, origin);
    const PointImage c = image(orb, cf, n, q_prev);
    if (abs(a.x - c.x) < floor) {
      throw InvariantError("degenerate_segment", "Delta^(n-1)_0 below the precision floor");
    }
    auto nodes = chebyshev_nodes(a.x, c.x, samples);
    for (int k = 0; k < samples; ++k) {
      const PointImage b = k == 0 ? a : k == samples - 1 ? c : image(orb, cf, n, nodes[k]);
      prof.m_samples.emplace_back(b.x, ratio_distortion(a, b, c));
    }
  }
  {
    const PointImage a = image(orb, cf, n - 1, origin);
    const PointImage edge = image(orb, cf, n - 1, q_prev2);
    const PointImage c = image(orb, cf, n - 1, q_cur);
    if (abs(a.x - edge.x) < floor) {
      throw InvariantError("degenerate_segment", "Delta^(n-2)_0 below the precision floor");
    }
    auto nodes = chebyshev_nodes(a.x, edge.x, samples);
    for (int k = 0; k < samples; ++k) {
      const PointImage b = k == 0 ? a : k == samples - 1 ? edge : image(orb, cf, n - 1, nodes[k]);
      prof.k_samples.emplace_back(b.x, ratio_distortion(a, b, c));
    }
  }
  prof.m_n = sqrt(prof.m_samples.front().second * prof.m_samples.back().second);

  std::vector<HighReal> ms, ks;
  for (const auto& s : prof.m_samples) ms.push_back(s.second);
  for (const auto& s : prof.k_samples) ks.push_back(s.second);
  if (min_of(ms) <= 0 || min_of(ks) <= 0) {
    throw InvariantError("non_positive_distortion", "M_n or K_n is not positive");
  }
  prof.m_oscillation = max_of(ms) / min_of(ms) - 1;
  prof.k_oscillation = max_of(ks) / min_of(ks) - 1;
  prof.m_normalized = prof.m_oscillation / pow(scales.at(n - 1), alpha);
  prof.k_normalized = prof.k_oscillation / pow(scales.at(n), alpha);
  // M_n(xi)/M_n(eta) is the cross-ratio distortion of T^{q_n} on (xi_0, xi, xi_{q_{n-1}}, eta).
  prof.dist_normalized = (log(max_of(ms)) - log(min_of(ms))) / pow(scales.at(n - 1), alpha);
  return prof;
}

HighReal ExactRelationResiduals::max_abs() const {
  HighReal m = abs(product);
  if (abs(shift) > m) m = abs(shift);
  if (abs(derivative) > m) m = abs(derivative);
  return m;
}

ExactRelationResiduals verify_exact_relations(const Orbit& orb, const ContinuedFraction& cf,
                                              int n, const HighReal& perturbation) {
  if (n < 1) throw PreconditionError("bad_level", "exact relations need n >= 1");
  const std::int64_t needed = cf.q64(n + 1) + cf.q64(n);
  if (orb.length() < needed) {
    throw ResourceError("orbit_too_short", "exact relations at level " + std::to_string(n) +
                                               " need " + std::to_string(needed) + " iterates");
  }
  const Node x0{0, 0};
  const Node x_prev = convergent(cf, n - 1);
  const Node x_cur = convergent(cf, n);
  const Node x_next = convergent(cf, n + 1);

  auto D = [](const PointImage& a, const PointImage& b, const PointImage& c) {
    return ratio_distortion(a, b, c);
  };
  auto M = [&](int m, Node at) {
    return D(image(orb, cf, m, x0), image(orb, cf, m, at),
             image(orb, cf, m, convergent(cf, m - 1)));
  };
  auto K = [&](int m, Node at) {
    return D(image(orb, cf, m - 1, x0), image(orb, cf, m - 1, at),
             image(orb, cf, m - 1, convergent(cf, m)));
  };
  auto seg = [&](int m) { return fundamental_segment(orb, cf, m, 0).length; };

  ExactRelationResiduals r;
  {
    PointImage moved = image(orb, cf, n - 1, x_cur);
    moved.x += perturbation;
    const HighReal k_at_qn = D(image(orb, cf, n - 1, x0), moved, image(orb, cf, n - 1, x_cur));
    r.product = M(n, x0) * M(n, x_prev) - K(n, x0) * k_at_qn;
  }
  r.shift = K(n + 1, x_prev) - 1 - seg(n + 1) / seg(n - 1) * (M(n, x_next) - 1);
  r.derivative = iterate_derivative(orb, 0, cf.q64(n + 1)) / M(n + 1, x0) - 1 -
                 seg(n + 1) / seg(n) * (1 - iterate_derivative(orb, 0, cf.q64(n)) / K(n + 1, x0));
  return r;
}

DecayReport verify_kneps_decay(const EpsilonSequence& eps, const ContinuedFraction& cf,
                               const HighReal& alpha, const HighReal& delta_hat, int first_level,
                               int n_max) {
  if (n_max - first_level + 1 < 4) {
    throw PreconditionError("too_few_levels", "decay fit needs at least 4 levels");
  }
  if (first_level < 1 || n_max >= static_cast<int>(eps.eps.size())) {
    throw PreconditionError("missing_scales", "decay fit levels outside the epsilon sequence");
  }
  DecayReport out;
  out.first_level = first_level;
  for (int n = first_level; n <= n_max; ++n) {
    out.kn_eps.push_back(eps.kn_eps[static_cast<std::size_t>(n)]);
    out.refined_ratio.push_back(out.kn_eps.back() / pow(cf.delta(n - 1), alpha - delta_hat));
  }
  out.rate = geometric_rate(out.kn_eps);
  out.refined_spread = max_of(out.refined_ratio) / min_of(out.refined_ratio);
  return out;
}

DenjoyReport denjoy_report(const CircleMap& map, const ContinuedFraction& cf, int n_max,
                           std::int64_t sample_count, const CirclePoint& xi0, std::int64_t cap) {
  if (n_max < 4) throw PreconditionError("too_few_levels", "denjoy report needs n_max >= 4");
  if (cf.levels() < n_max + 1) {
    throw PreconditionError("target_too_short", "continued fraction must reach level n_max + 1");
  }
  const std::int64_t needed = cf.q64(n_max + 1) + cf.q64(n_max);
  if (needed > cap) {
    int reachable = 0;
    while (reachable + 1 <= n_max && cf.q64(reachable + 2) + cf.q64(reachable + 1) <= cap) {
      ++reachable;
    }
    throw ResourceError("orbit_cap", "level " + std::to_string(n_max) + " needs " +
                                         std::to_string(needed) + " iterates; levels up to " +
                                         std::to_string(reachable) + " fit the cap");
  }
  const Orbit orb = orbit(map, xi0, needed, cap);
  const LengthScales scales = length_scales(orb, cf, n_max);
  const HighReal& alpha = map.alpha();

  DenjoyReport report;
  report.delta_hat = diophantine_exponent(cf, n_max);
  const EpsilonSequence eps = epsilon_sequence(scales, cf, alpha, report.delta_hat);
  report.diophantine_constant = eps.diophantine_constant;
  report.max_residual = 0;

  std::vector<HighReal> s_values, ratios;
  for (int n = 1; n <= n_max; ++n) {
    DenjoyRow row;
    row.n = n;
    row.q_n = cf.q(n);
    row.delta_n = cf.delta(n);
    row.l_n = scales.at(n);
    const DenjoyLevel level = denjoy_check(orb, cf, scales, n, sample_count);
    row.eps_n = level.eps_n;
    row.s_n = level.s_n;
    row.ratio = level.ratio;
    row.naive_ratio = level.naive_ratio;
    row.kn_eps = eps.kn_eps[static_cast<std::size_t>(n)];
    row.residuals = verify_exact_relations(orb, cf, n);
    if (row.residuals.max_abs() > report.max_residual) {
      report.max_residual = row.residuals.max_abs();
    }
    s_values.push_back(row.s_n);
    ratios.push_back(row.ratio);
    report.rows.push_back(std::move(row));
  }
  if (min_of(s_values) > 0) {
    report.s_rate = geometric_rate(s_values);
    report.ratio_spread = max_of(ratios) / min_of(ratios);
  } else {
    report.s_rate = 0;
    report.ratio_spread = 0;
  }
  report.decay = verify_kneps_decay(eps, cf, alpha, report.delta_hat, 1, n_max);
  report.statements = verify_statement_A_B(orb, cf, scales, n_max);
  return report;
}

}  // namespace circlab
