#include "sld/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sld/errors.hpp"

namespace sld {

void WeibullSpec::validate() const {
  if (!(alpha > 0.0)) throw DomainError("weibull: alpha must be positive");
  if (!(c_lower > 0.0) || !(c_lower <= c_upper)) {
    throw DomainError("weibull: need 0 < c_lower <= c_upper");
  }
  if (!(eta > 0.0)) throw DomainError("weibull: eta must be positive");
  if (!(poly_power >= 0.0)) throw DomainError("weibull: poly_power must be >= 0");
}

namespace {

void require_sampler(const WeibullSpec& spec) {
  spec.validate();
  if (!spec.is_canonical()) {
    throw UnsupportedSampler(
        "weibull: only the canonical tail law (c_lower = c_upper = 1, "
        "poly_power = 0) can be sampled");
  }
}

}  // namespace

double weibull_from_uniform(const WeibullSpec& spec, double u, bool negative) {
  const double mag = std::pow(-std::log(u) / spec.eta, 1.0 / spec.alpha);
  return negative ? -mag : mag;
}

double conditioned_from_uniform(const WeibullSpec& spec, double threshold,
                                double u, bool negative) {
  const double base = std::pow(threshold, spec.alpha);
  const double mag =
      std::pow(base - std::log(u) / spec.eta, 1.0 / spec.alpha);
  return negative ? -mag : mag;
}

double sample(const WeibullSpec& spec, Stream& rng) {
  require_sampler(spec);
  const bool negative = rng.coin();
  return weibull_from_uniform(spec, rng.uniform_pos(), negative);
}

double sample_conditioned(const WeibullSpec& spec, double threshold,
                          Stream& rng) {
  require_sampler(spec);
  if (!(threshold >= 0.0)) {
    throw DomainError("sample_conditioned: threshold must be >= 0");
  }
  const bool negative = rng.coin();
  double u = rng.uniform_pos();
  // u == 1 would land exactly on the threshold; the conditioning is strict.
  while (u == 1.0 && threshold > 0.0) u = rng.uniform_pos();
  return conditioned_from_uniform(spec, threshold, u, negative);
}

Interval tail_prob(const WeibullSpec& spec, double t) {
  spec.validate();
  if (!(t >= 0.0)) throw DomainError("tail_prob: t must be >= 0");
  const double core = std::exp(-spec.eta * std::pow(t, spec.alpha));
  if (spec.is_canonical()) return {core, core};
  const double poly = spec.poly_power > 0.0 ? std::pow(t, -spec.poly_power) : 1.0;
  const double lo = spec.c_lower * poly * core;
  const double hi = spec.c_upper * poly * core;
  if (t > 1.0) return {lo, hi};
  return {std::min(1.0, lo), 1.0};
}

Interval sum_sq_tail_sandwich(int k, double t, const WeibullSpec& spec) {
  spec.validate();
  if (!(spec.alpha > 2.0)) {
    throw DomainError("sum_sq_tail_sandwich: requires alpha > 2");
  }
  if (k < 2) throw DomainError("sum_sq_tail_sandwich: requires k >= 2");
  if (!(t > k)) throw DomainError("sum_sq_tail_sandwich: requires t > k");
  const double a = spec.alpha;
  const double kd = k;
  const double shape = std::pow(kd, 1.0 - a / 2.0);
  const double log_lo =
      kd * std::log(spec.c_lower) - std::pow(t, a / 2.0) * shape;
  const double log_hi = kd * std::log(spec.c_upper) +
                        kd * std::log(2.0 * std::exp(1.0) * t / kd) -
                        std::pow(t - kd, a / 2.0) * shape;
  return {std::exp(log_lo), std::exp(log_hi)};
}

double alpha_power_sum_bound(int m, double L, const WeibullSpec& spec,
                             double epsilon, double n,
                             std::optional<double> constant) {
  spec.validate();
  if (m < 1) throw DomainError("alpha_power_sum_bound: requires m >= 1");
  if (!(L > m)) throw DomainError("alpha_power_sum_bound: requires L > m");
  if (!(epsilon > 0.0)) {
    throw DomainError("alpha_power_sum_bound: requires epsilon > 0");
  }
  if (!(n >= 3.0)) throw DomainError("alpha_power_sum_bound: requires n >= 3");
  const double c = constant.value_or(std::max(1.0, spec.c_upper));
  if (!(c > 0.0)) throw DomainError("alpha_power_sum_bound: constant must be > 0");
  const double md = m;
  const double log_bound = md * std::log(c) - L + md + md * std::log(L / md) +
                           epsilon * md * std::log(std::log(n));
  return std::exp(log_bound);
}

double relative_entropy(double p, double q) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("relative_entropy: p must lie in (0, 1)");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("relative_entropy: q must lie in [0, 1]");
  }
  const double a = q > 0.0 ? q * std::log(q / p) : 0.0;
  const double b = q < 1.0 ? (1.0 - q) * std::log((1.0 - q) / (1.0 - p)) : 0.0;
  return std::max(0.0, a + b);
}

Interval binomial_tail_sandwich(long m, double q, double theta) {
  if (m < 1) throw DomainError("binomial_tail_sandwich: requires m >= 1");
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("binomial_tail_sandwich: q must lie in (0, 1)");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("binomial_tail_sandwich: theta must lie in (0, 1)");
  }
  if (theta == q) {
    throw DomainError("binomial_tail_sandwich: degenerate threshold theta == q");
  }
  const double md = static_cast<double>(m);
  const double upper = std::exp(-md * relative_entropy(q, theta));
  const double lower = upper / std::sqrt(8.0 * md * theta * (1.0 - theta));
  return {std::min(lower, upper), upper};
}

}  // namespace sld
