#pragma once

#include <optional>
#include <vector>

namespace sld {

/// Two-block maximizer of
///   phi_theta(k) = sup_{||v||_1 = 1} sum_{i != j} |v_i|^theta |v_j|^theta
/// of the form (x,...,x, y,...,y, 0,...,0) with k1 copies of x >= y and k2
/// copies of y, so that k1 x + k2 y = 1.
struct VariationalSolution {
  double theta = 0.0;
  int k = 0;
  double value = 0.0;
  int k1 = 0;
  int k2 = 0;
  double x = 0.0;
  double y = 0.0;

  int support() const noexcept { return k1 + k2; }
};

/// 2 C(k1,2) x^(2 theta) + 2 C(k2,2) y^(2 theta) + 2 k1 k2 x^theta y^theta.
double two_block_objective(double theta, int k1, int k2, double x, double y);

/// phi_theta(k) for theta > 1 by exhaustive two-block search.
///
/// Every split (k1, k2) with k1 + k2 <= k is tried; the one-dimensional
/// problem in x is solved by a 200-point scan, golden-section refinement and
/// a guarded Newton step. Ties go to the smaller support. Results are
/// memoized per theta; the cache is safe for concurrent use.
VariationalSolution phi(double theta, int k, double tol = 1e-12);

/// phi(theta, 2..k_max), computed in one sweep.
std::vector<VariationalSolution> phi_table(double theta, int k_max);

/// Brute-force lower bound on phi_theta(k) for k <= 6: best point of the
/// uniform simplex grid with `grid` subdivisions, polished by projected
/// gradient ascent from the ten best grid points. Throws BudgetError when k
/// or the grid size is too large.
double phi_oracle(double theta, int k, int grid);

/// Motzkin-Straus value (k - 1) / k.
double phi_motzkin_straus(int k);

/// k-independent bound r^(2 theta - 2) - r^(2 theta - 1), r = (2 theta - 2) / (2 theta - 1).
double phi_upper_bound(double theta);

/// Exact value when k <= (2 theta - 1) / (2 theta - 2) or k == 2.
std::optional<double> phi_closed_form(double theta, int k);

struct Plateau {
  bool found = false;
  int k_star = 0;  // smallest k whose value matches phi(theta, k_max)
  double value = 0.0;
};

/// Onset of the constant tail of k -> phi_theta(k) within [2, k_max]; only
/// reported as found when the optimal support stops growing before k_max.
Plateau phi_plateau(double theta, int k_max);

/// Clique cost k(k-3)/2 + (1/2)(1+delta)^alpha phi_{beta/2}(k)^(1-alpha),
/// beta = alpha / (alpha - 1), for 1 < alpha < 2.
double psi(double alpha, double delta, int k);

struct RateMin {
  double rate = 0.0;
  int argmin_k = 2;
  bool tie = false;  // another k attained the minimum to within 1e-12
};

inline constexpr int kDefaultRateKMax = 64;

/// Heavy-tail upper-tail rate. For alpha <= 1 this is (1+delta)^alpha - 1
/// at k = 2; for 1 < alpha < 2 the minimum of psi over [2, k_max], which is
/// exact once k_max passes the plateau of phi_{beta/2}. Throws
/// InsufficientRange otherwise.
RateMin heavy_rate(double alpha, double delta, int k_max = kDefaultRateKMax);

/// Gaussian comparison k(k-3)/2 + (1+delta)/2 * k/(k-1).
double gaussian_psi_bar(double delta, int k);

/// Minimum of gaussian_psi_bar over [2, k_max]; throws InsufficientRange if
/// the minimum sits on the k_max boundary.
RateMin gaussian_rate(double delta, int k_max = 200);

/// 2^(1/alpha) alpha^(-1/2) (alpha - 2)^(1/2 - 1/alpha), alpha > 2.
double b_alpha(double alpha);

/// B_alpha (log n)^(1/2) / (log log n)^(1/2 - 1/alpha).
double typical_light(double alpha, double n);

/// (log n)^(1/alpha), 0 < alpha < 2.
double typical_heavy(double alpha, double n);

struct LightRates {
  double upper = 0.0;                // (1+delta)^2 - 1
  std::optional<double> lower;       // 1 - (1-delta)^2, only for delta < 1
};

LightRates light_rates(double delta);

/// Optimal star degree factor (1+delta)^2 (1 - 2/alpha).
double gamma_delta(double alpha, double delta);

/// 1 - x - (1+rho)^alpha (2/(alpha-2)) (1-2/alpha)^(alpha/2) x^(1-alpha/2).
double f_rate(double alpha, double rho, double x);

struct FRateMax {
  double gamma_star = 0.0;
  double max_value = 0.0;
};

FRateMax f_rate_max(double alpha, double rho);

/// Bound on sum over tree edges of f_i^theta f_j^theta when sum f = s and
/// 0 <= f_i <= xi: s^(2 theta)/4 if s < 2 xi, else xi^theta (s - xi)^theta.
double tree_edge_bound(double theta, double s, double xi);

}  // namespace sld
