#include "circlab/cfarith.hpp"

#include <limits>
#include <sstream>

namespace circlab {
namespace {

struct ExactRational {
  BigInt num;
  BigInt den;
};

// Every working-precision value is a dyadic rational; recover it exactly.
ExactRational exact_rational(const HighReal& x) {
  BigInt mantissa;
  const long e = mpfr_get_z_2exp(mantissa.backend().data(), x.backend().data());
  BigInt num = mantissa, den = 1;
  if (e >= 0) {
    num <<= e;
  } else {
    den <<= -e;
  }
  const BigInt g = gcd(num, den);
  return {num / g, den / g};
}

HighReal to_high(const BigInt& z) { return HighReal(z); }

std::vector<HighReal> exact_deltas(const std::vector<BigInt>& p, const std::vector<BigInt>& q,
                                   const ExactRational& rho) {
  std::vector<HighReal> out;
  out.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    BigInt diff = q[i] * rho.num - p[i] * rho.den;
    if (diff < 0) diff = -diff;
    out.push_back(to_high(diff) / to_high(rho.den));
  }
  return out;
}

}  // namespace

std::int64_t ContinuedFraction::k(int n) const {
  if (n < 1 || n > levels()) {
    throw PreconditionError("level_out_of_range", "partial quotient k_" + std::to_string(n) +
                                                      " not available");
  }
  return quotients_[static_cast<std::size_t>(n - 1)];
}

const BigInt& ContinuedFraction::p(int n) const {
  if (n < -1 || n > levels()) {
    throw PreconditionError("level_out_of_range", "p_" + std::to_string(n) + " not available");
  }
  return p_[static_cast<std::size_t>(n + 1)];
}

const BigInt& ContinuedFraction::q(int n) const {
  if (n < -1 || n > levels()) {
    throw PreconditionError("level_out_of_range", "q_" + std::to_string(n) + " not available");
  }
  return q_[static_cast<std::size_t>(n + 1)];
}

std::int64_t ContinuedFraction::q64(int n) const {
  const BigInt& v = q(n);
  if (v > std::numeric_limits<std::int64_t>::max()) {
    throw ResourceError("integer_overflow", "q_" + std::to_string(n) + " exceeds 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

std::int64_t ContinuedFraction::p64(int n) const {
  const BigInt& v = p(n);
  if (v > std::numeric_limits<std::int64_t>::max()) {
    throw ResourceError("integer_overflow", "p_" + std::to_string(n) + " exceeds 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

const HighReal& ContinuedFraction::delta(int n) const {
  if (n < -1 || n > levels()) {
    throw PreconditionError("level_out_of_range",
                            "Delta_" + std::to_string(n) + " not available");
  }
  return deltas_[static_cast<std::size_t>(n + 1)];
}

ContinuedFraction ContinuedFraction::from_quotients(std::vector<std::int64_t> quotients,
                                                    const HighReal& value) {
  ContinuedFraction cf;
  cf.p_ = {BigInt(1), BigInt(0)};
  cf.q_ = {BigInt(0), BigInt(1)};
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    if (quotients[i] < 1) {
      throw PreconditionError("bad_quotient", "partial quotients must be positive");
    }
    const BigInt k = quotients[i];
    cf.p_.push_back(k * cf.p_[i + 1] + cf.p_[i]);
    cf.q_.push_back(k * cf.q_[i + 1] + cf.q_[i]);
  }
  cf.quotients_ = std::move(quotients);
  cf.value_ = value;
  cf.deltas_ = exact_deltas(cf.p_, cf.q_, exact_rational(value));
  return cf;
}

ContinuedFraction cf_expand(const HighReal& rho, int levels) {
  if (rho <= 0 || rho >= 1) {
    throw PreconditionError("rho_out_of_range", "cf_expand needs 0 < rho < 1");
  }
  if (levels < 0) throw PreconditionError("bad_levels", "levels must be >= 0");
  const ExactRational r = exact_rational(rho);
  const HighReal floor_delta = precision_tolerance(10);
  std::vector<std::int64_t> quotients;
  BigInt num = r.num, den = r.den;
  BigInt p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  while (static_cast<int>(quotients.size()) < levels) {
    if (num == 0) break;
    // Delta of the current level must still be resolvable.
    BigInt diff = q_cur * r.num - p_cur * r.den;
    if (diff < 0) diff = -diff;
    if (!quotients.empty() && to_high(diff) / to_high(r.den) < floor_delta) break;
    const BigInt k = den / num;
    if (k > std::numeric_limits<std::int64_t>::max()) break;
    quotients.push_back(k.convert_to<std::int64_t>());
    BigInt rest = den - k * num;
    den = num;
    num = rest;
    BigInt p_next = k * p_cur + p_prev, q_next = k * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
  }
  if (static_cast<int>(quotients.size()) < levels) {
    throw PreconditionError("precision_exhausted",
                            "precision exhausted after " + std::to_string(quotients.size()) +
                                " of " + std::to_string(levels) + " levels");
  }
  return ContinuedFraction::from_quotients(std::move(quotients), rho);
}

std::vector<HighReal> deltas(const ContinuedFraction& cf) { return cf.deltas(); }

HighReal value_of(const std::vector<std::int64_t>& quotients) {
  HighReal x = 0;
  for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) {
    x = 1 / (HighReal(*it) + x);
  }
  return x;
}

DiophantineEstimate estimate_diophantine_class(const ContinuedFraction& cf, int window_first) {
  const int n_levels = cf.levels();
  if (n_levels < 5) {
    throw PreconditionError("too_few_levels", "Diophantine estimate needs >= 5 levels");
  }
  DiophantineEstimate est;
  for (int n = 1; n <= n_levels; ++n) {
    HighReal d = log(cf.delta(n)) / log(cf.delta(n - 1)) - 1;
    est.per_level.push_back(d > 0 ? d : HighReal(0));
  }
  est.window_first = window_first >= 1 ? window_first : std::max(2, n_levels / 2);
  est.window_last = n_levels;
  if (est.window_first > n_levels) {
    throw PreconditionError("too_few_levels", "Diophantine window starts past the last level");
  }
  est.delta_hat = 0;
  for (int n = est.window_first; n <= n_levels; ++n) {
    const HighReal& d = est.per_level[static_cast<std::size_t>(n - 1)];
    if (d > est.delta_hat) est.delta_hat = d;
  }
  return est;
}

HighReal periodic_value(const std::vector<std::int64_t>& word) {
  if (word.empty()) throw PreconditionError("bad_word", "periodic word must be non-empty");
  // x = [w1..wm + x] = (p_m + x p_{m-1}) / (q_m + x q_{m-1})
  BigInt p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  for (auto w : word) {
    if (w < 1) throw PreconditionError("bad_word", "periodic word entries must be >= 1");
    BigInt p_next = w * p_cur + p_prev, q_next = w * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
  }
  const HighReal a = to_high(q_prev);
  const HighReal b = to_high(q_cur - p_prev);
  const HighReal c = -to_high(p_cur);
  // Positive root, written in the cancellation-free form.
  return (2 * -c) / (b + sqrt(b * b - 4 * a * c));
}

HighReal quadratic_irrational(const std::string& kind) {
  if (kind == "golden") return periodic_value({1});
  if (kind == "silver") return periodic_value({2});
  std::vector<std::int64_t> word;
  std::string body = kind.rfind("word:", 0) == 0 ? kind.substr(5) : kind;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      word.push_back(v);
    } catch (const std::exception&) {
      throw PreconditionError("bad_word", "invalid rotation target '" + kind + "'");
    }
  }
  return periodic_value(word);
}

std::string quotients_to_string(const std::vector<std::int64_t>& quotients) {
  std::string out = "[";
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(quotients[i]);
  }
  return out + "]";
}

}  // namespace circlab
