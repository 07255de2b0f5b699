#pragma once

#include <optional>

#include "sld/rng.hpp"

namespace sld {

/// Symmetric Weibull-type tail law.
///
/// Describes a variable W with c_lower * t^-poly * exp(-eta t^alpha) <=
/// P(|W| >= t) <= c_upper * t^-poly * exp(-eta t^alpha) for t > 1. Only the
/// canonical member (c_lower = c_upper = 1, poly_power = 0) has a sampler;
/// the rest exist to evaluate bounds.
struct WeibullSpec {
  double alpha = 1.0;
  double c_lower = 1.0;
  double c_upper = 1.0;
  double eta = 1.0;
  double poly_power = 0.0;

  static WeibullSpec canonical(double alpha, double eta = 1.0) {
    return WeibullSpec{alpha, 1.0, 1.0, eta, 0.0};
  }

  bool is_canonical() const noexcept {
    return c_lower == 1.0 && c_upper == 1.0 && poly_power == 0.0;
  }

  /// Throws DomainError when the fields violate the type invariants.
  void validate() const;
};

struct Interval {
  double lower;
  double upper;
};

/// Inverse-CDF map used by the sampler: sign * (-log u / eta)^(1/alpha).
double weibull_from_uniform(const WeibullSpec& spec, double u, bool negative);

/// Conditioned inverse-CDF map: sign * (threshold^alpha - log u / eta)^(1/alpha).
double conditioned_from_uniform(const WeibullSpec& spec, double threshold,
                                double u, bool negative);

double sample(const WeibullSpec& spec, Stream& rng);

/// Draw from W conditioned on |W| > threshold.
double sample_conditioned(const WeibullSpec& spec, double threshold,
                          Stream& rng);

/// Sandwich on P(|W| >= t).
Interval tail_prob(const WeibullSpec& spec, double t);

/// Bounds on P(Y_1^2 + ... + Y_k^2 >= t) for i.i.d. light-tailed weights.
/// Requires alpha > 2 and t > k >= 2.
Interval sum_sq_tail_sandwich(int k, double t, const WeibullSpec& spec);

/// Upper bound on P(|Y~_1|^alpha + ... + |Y~_m|^alpha >= L) where Y~ is
/// conditioned on |Y| > (epsilon log log n)^(1/alpha). The prefactor constant
/// defaults to max(1, c_upper).
double alpha_power_sum_bound(int m, double L, const WeibullSpec& spec,
                             double epsilon, double n,
                             std::optional<double> constant = std::nullopt);

/// Bernoulli relative entropy I_p(q), with 0 log 0 = 0.
double relative_entropy(double p, double q);

/// Constant c in I_p(p/2) >= c p.
inline constexpr double kEntropyHalfConstant = 0.15342640972002735;  // (1 - log 2) / 2

/// Sandwich on P(X >= theta m) for theta > q, or on P(X <= theta m) for
/// theta < q, where X ~ Binomial(m, q).
Interval binomial_tail_sandwich(long m, double q, double theta);

}  // namespace sld
