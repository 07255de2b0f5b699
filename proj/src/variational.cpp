#include "sld/variational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <shared_mutex>
#include <string>

#include "sld/errors.hpp"

namespace sld {

double two_block_objective(double theta, int k1, int k2, double x, double y) {
  const double a = static_cast<double>(k1);
  const double b = static_cast<double>(k2);
  const bool has_x = k1 > 0 && x > 0.0;
  const bool has_y = k2 > 0 && y > 0.0;
  double v = 0.0;
  if (has_x) v += a * (a - 1.0) * std::pow(x, 2.0 * theta);
  if (has_y) v += b * (b - 1.0) * std::pow(y, 2.0 * theta);
  if (has_x && has_y) v += 2.0 * a * b * std::pow(x * y, theta);
  return v;
}

namespace {

void require_theta(double theta) {
  if (!(theta > 1.0)) {
    throw DomainError("phi: requires theta > 1 (use phi_motzkin_straus for theta = 1)");
  }
}

struct Candidate {
  double value;
  double x;
  double y;
};

// One-dimensional maximization in x over [1/(k1+k2), 1/k1] for a fixed split.
class SplitProblem {
 public:
  SplitProblem(double theta, int k1, int k2)
      : theta_(theta), k1_(k1), k2_(k2), lo_(1.0 / (k1 + k2)), hi_(1.0 / k1) {}

  double y_of(double x) const {
    return std::max(0.0, (1.0 - k1_ * x) / k2_);
  }

  double value(double x) const { return two_block_objective(theta_, k1_, k2_, x, y_of(x)); }

  double slope(double x) const {
    const double y = y_of(x);
    const double t = theta_;
    const double a = k1_;
    const double b = k2_;
    double d = 2.0 * t * a * (a - 1.0) * std::pow(x, 2.0 * t - 1.0);
    if (y > 0.0) {
      d -= 2.0 * t * a * (b - 1.0) * std::pow(y, 2.0 * t - 1.0);
      d += 2.0 * a * t * std::pow(x * y, t - 1.0) * (b * y - a * x);
    }
    return d;
  }

  Candidate solve() const {
    constexpr int kGrid = 200;
    const double width = hi_ - lo_;
    int best_i = 0;
    double best_v = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
      const double x = i == kGrid ? hi_ : lo_ + width * i / kGrid;
      const double v = value(x);
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    double a = lo_ + width * std::max(0, best_i - 1) / kGrid;
    double b = best_i + 1 >= kGrid ? hi_ : lo_ + width * (best_i + 1) / kGrid;

    // Golden-section search for the maximum on [a, b].
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = value(c);
    double fd = value(d);
    while (b - a > 1e-14) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = value(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = value(d);
      }
    }
    double x = 0.5 * (a + b);
    double v = value(x);

    // Newton polish, only where the objective is locally concave.
    const double h = 1e-7 * std::max(x, 1e-3);
    if (x - h > lo_ && x + h < hi_) {
      const double curv = (slope(x + h) - slope(x - h)) / (2.0 * h);
      if (curv < 0.0) {
        const double xn = x - slope(x) / curv;
        if (xn >= lo_ && xn <= hi_) {
          const double vn = value(xn);
          if (vn > v) {
            x = xn;
            v = vn;
          }
        }
      }
    }

    Candidate out{v, x, y_of(x)};
    for (double end : {lo_, hi_}) {
      const double ve = value(end);
      if (ve >= out.value) out = {ve, end, y_of(end)};
    }
    return out;
  }

 private:
  double theta_;
  int k1_;
  int k2_;
  double lo_;
  double hi_;
};

// Best two-block candidate whose support is exactly s.
VariationalSolution best_with_support(double theta, int s) {
  VariationalSolution best;
  best.theta = theta;
  best.k1 = s;
  best.k2 = 0;
  best.x = 1.0 / s;
  best.y = 0.0;
  best.value = two_block_objective(theta, s, 0, best.x, 0.0);
  for (int k1 = 1; k1 < s; ++k1) {
    const int k2 = s - k1;
    const auto c = SplitProblem(theta, k1, k2).solve();
    if (c.value > best.value * (1.0 + 1e-15)) {
      best.value = c.value;
      best.k1 = k1;
      best.k2 = k2;
      best.x = c.x;
      best.y = c.y;
    }
  }
  // Degenerate splits collapse onto a uniform block.
  if (best.k2 > 0 && (best.y <= 0.0 || best.x == best.y)) {
    if (best.y <= 0.0) {
      best.k2 = 0;
      best.y = 0.0;
      best.x = 1.0 / best.k1;
    } else {
      best.k1 += best.k2;
      best.k2 = 0;
      best.y = 0.0;
    }
  }
  return best;
}

class PhiCache {
 public:
  std::vector<VariationalSolution> table(double theta, int k_max) {
    {
      std::shared_lock lock(mutex_);
      auto it = per_support_.find(theta);
      if (it != per_support_.end() && static_cast<int>(it->second.size()) + 1 >= k_max) {
        return prefix(it->second, k_max);
      }
    }
    std::vector<VariationalSolution> computed;
    {
      std::shared_lock lock(mutex_);
      auto it = per_support_.find(theta);
      if (it != per_support_.end()) computed = it->second;
    }
    for (int s = static_cast<int>(computed.size()) + 2; s <= k_max; ++s) {
      computed.push_back(best_with_support(theta, s));
    }
    {
      std::unique_lock lock(mutex_);
      auto& slot = per_support_[theta];
      if (slot.size() < computed.size()) slot = computed;
    }
    return prefix(computed, k_max);
  }

 private:
  // phi(k) is the best over supports s <= k; ties keep the smaller support.
  static std::vector<VariationalSolution> prefix(
      const std::vector<VariationalSolution>& by_support, int k_max) {
    std::vector<VariationalSolution> out;
    out.reserve(static_cast<std::size_t>(std::max(0, k_max - 1)));
    VariationalSolution best = by_support.front();
    for (int k = 2; k <= k_max; ++k) {
      const auto& cand = by_support[static_cast<std::size_t>(k - 2)];
      if (cand.value > best.value * (1.0 + 1e-14)) best = cand;
      best.k = k;
      out.push_back(best);
    }
    return out;
  }

  std::shared_mutex mutex_;
  std::map<double, std::vector<VariationalSolution>> per_support_;
};

PhiCache& phi_cache() {
  static PhiCache cache;
  return cache;
}

}  // namespace

std::vector<VariationalSolution> phi_table(double theta, int k_max) {
  require_theta(theta);
  if (k_max < 2) throw DomainError("phi_table: requires k_max >= 2");
  return phi_cache().table(theta, k_max);
}

VariationalSolution phi(double theta, int k, double tol) {
  require_theta(theta);
  if (k < 2) throw DomainError("phi: requires k >= 2");
  if (!(tol > 0.0)) throw DomainError("phi: tol must be positive");
  // The 1-D searches resolve x to 1e-14, far inside any tol a caller can ask
  // for in double precision.
  return phi_cache().table(theta, k).back();
}

namespace {

double simplex_objective(double theta, const std::vector<double>& f) {
  double s1 = 0.0, s2 = 0.0;
  for (double v : f) {
    const double t = v > 0.0 ? std::pow(v, theta) : 0.0;
    s1 += t;
    s2 += t * t;
  }
  return s1 * s1 - s2;
}

void simplex_gradient(double theta, const std::vector<double>& f, std::vector<double>& g) {
  double s1 = 0.0;
  for (double v : f) s1 += v > 0.0 ? std::pow(v, theta) : 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= 0.0) {
      g[i] = 0.0;
      continue;
    }
    const double t = std::pow(f[i], theta);
    g[i] = 2.0 * theta * std::pow(f[i], theta - 1.0) * (s1 - t);
  }
}

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  for (auto& x : v) x = std::max(0.0, x - tau);
}

double ascend(double theta, std::vector<double> f) {
  std::vector<double> g(f.size()), trial(f.size());
  double value = simplex_objective(theta, f);
  double step = 0.1;
  for (int it = 0; it < 20000; ++it) {
    simplex_gradient(theta, f, g);
    bool moved = false;
    while (step > 1e-16) {
      for (std::size_t i = 0; i < f.size(); ++i) trial[i] = f[i] + step * g[i];
      project_simplex(trial);
      const double tv = simplex_objective(theta, trial);
      if (tv > value) {
        const double gain = tv - value;
        f.swap(trial);
        value = tv;
        moved = gain > 1e-17;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return value;
}

}  // namespace

double phi_oracle(double theta, int k, int grid) {
  require_theta(theta);
  if (k < 2) throw DomainError("phi_oracle: requires k >= 2");
  if (k > 6) throw BudgetError("phi_oracle: brute force limited to k <= 6");
  if (grid < 1) throw DomainError("phi_oracle: requires grid >= 1");
  // C(grid + k - 1, k - 1) lattice points.
  double points = 1.0;
  for (int i = 1; i < k; ++i) points *= static_cast<double>(grid + i) / i;
  if (points > 5e7) throw BudgetError("phi_oracle: grid too fine for brute force");

  using Entry = std::pair<double, std::vector<int>>;
  auto worse = [](const Entry& a, const Entry& b) { return a.first > b.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> top(worse);

  std::vector<int> c(k, 0);
  std::vector<double> f(k);
  // Enumerate compositions of `grid` into k parts.
  auto visit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == k - 1) {
      c[pos] = remaining;
      for (int i = 0; i < k; ++i) f[i] = static_cast<double>(c[i]) / grid;
      const double v = simplex_objective(theta, f);
      if (top.size() < 10) {
        top.emplace(v, c);
      } else if (v > top.top().first) {
        top.pop();
        top.emplace(v, c);
      }
      return;
    }
    for (int part = 0; part <= remaining; ++part) {
      c[pos] = part;
      self(self, pos + 1, remaining - part);
    }
  };
  visit(visit, 0, grid);

  double best = 0.0;
  while (!top.empty()) {
    const auto& [v, cc] = top.top();
    for (int i = 0; i < k; ++i) f[i] = static_cast<double>(cc[i]) / grid;
    best = std::max(best, std::max(v, ascend(theta, f)));
    top.pop();
  }
  return best;
}

double phi_motzkin_straus(int k) {
  if (k < 2) throw DomainError("phi_motzkin_straus: requires k >= 2");
  return static_cast<double>(k - 1) / static_cast<double>(k);
}

double phi_upper_bound(double theta) {
  require_theta(theta);
  const double r = (2.0 * theta - 2.0) / (2.0 * theta - 1.0);
  return std::pow(r, 2.0 * theta - 2.0) - std::pow(r, 2.0 * theta - 1.0);
}

std::optional<double> phi_closed_form(double theta, int k) {
  require_theta(theta);
  if (k < 2) throw DomainError("phi_closed_form: requires k >= 2");
  if (k == 2) return std::pow(2.0, 1.0 - 2.0 * theta);
  const double limit = (2.0 * theta - 1.0) / (2.0 * theta - 2.0);
  if (static_cast<double>(k) <= limit) {
    const double kd = k;
    return std::pow(kd, 2.0 - 2.0 * theta) - std::pow(kd, 1.0 - 2.0 * theta);
  }
  return std::nullopt;
}

Plateau phi_plateau(double theta, int k_max) {
  const auto table = phi_table(theta, k_max);
  const double top = table.back().value;
  Plateau p;
  for (const auto& s : table) {
    if (s.value >= top - 1e-9) {
      p.k_star = s.k;
      p.value = s.value;
      break;
    }
  }
  p.found = p.k_star < k_max;
  return p;
}

namespace {

void require_psi_domain(double alpha, double delta) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("psi: requires 1 < alpha < 2");
  if (!(delta >= 0.0)) throw DomainError("psi: requires delta >= 0");
}

double psi_from_phi(double alpha, double delta, int k, double phi_value) {
  const double kd = k;
  return kd * (kd - 3.0) / 2.0 +
         0.5 * std::pow(1.0 + delta, alpha) * std::pow(phi_value, 1.0 - alpha);
}

RateMin argmin_of(const std::vector<double>& values, int k_first) {
  RateMin r;
  r.rate = values.front();
  r.argmin_k = k_first;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < r.rate) {
      r.rate = values[i];
      r.argmin_k = k_first + static_cast<int>(i);
    }
  }
  int hits = 0;
  for (double v : values) {
    if (std::abs(v - r.rate) <= 1e-12 * std::max(1.0, std::abs(r.rate))) ++hits;
  }
  r.tie = hits > 1;
  return r;
}

}  // namespace

double psi(double alpha, double delta, int k) {
  require_psi_domain(alpha, delta);
  if (k < 2) throw DomainError("psi: requires k >= 2");
  const double beta = alpha / (alpha - 1.0);
  return psi_from_phi(alpha, delta, k, phi(beta / 2.0, k).value);
}

RateMin heavy_rate(double alpha, double delta, int k_max) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("heavy_rate: requires 0 < alpha < 2");
  if (!(delta >= 0.0)) throw DomainError("heavy_rate: requires delta >= 0");
  if (alpha <= 1.0) {
    return RateMin{std::pow(1.0 + delta, alpha) - 1.0, 2, false};
  }
  if (k_max < 3) throw InsufficientRange("heavy_rate: k_max must be at least 3");
  const double theta = alpha / (alpha - 1.0) / 2.0;
  const auto plateau = phi_plateau(theta, k_max);
  if (!plateau.found) {
    throw InsufficientRange("heavy_rate: k_max=" + std::to_string(k_max) +
                            " does not reach the plateau of phi");
  }
  const auto table = phi_table(theta, k_max);
  std::vector<double> values;
  values.reserve(table.size());
  for (const auto& s : table) values.push_back(psi_from_phi(alpha, delta, s.k, s.value));
  return argmin_of(values, 2);
}

double gaussian_psi_bar(double delta, int k) {
  if (!(delta >= 0.0)) throw DomainError("gaussian_psi_bar: requires delta >= 0");
  if (k < 2) throw DomainError("gaussian_psi_bar: requires k >= 2");
  const double kd = k;
  return kd * (kd - 3.0) / 2.0 + (1.0 + delta) / 2.0 * kd / (kd - 1.0);
}

RateMin gaussian_rate(double delta, int k_max) {
  if (k_max < 3) throw InsufficientRange("gaussian_rate: k_max must be at least 3");
  std::vector<double> values;
  for (int k = 2; k <= k_max; ++k) values.push_back(gaussian_psi_bar(delta, k));
  auto r = argmin_of(values, 2);
  if (r.argmin_k == k_max) {
    throw InsufficientRange("gaussian_rate: minimum on the k_max boundary");
  }
  return r;
}

double b_alpha(double alpha) {
  if (!(alpha > 2.0)) throw DomainError("b_alpha: requires alpha > 2");
  return std::pow(2.0, 1.0 / alpha) * std::pow(alpha, -0.5) *
         std::pow(alpha - 2.0, 0.5 - 1.0 / alpha);
}

double typical_light(double alpha, double n) {
  const double b = b_alpha(alpha);
  if (!(n > 0.0) || !(std::log(std::log(n)) > 0.0)) {
    throw DomainError("typical_light: requires log log n > 0");
  }
  const double ln = std::log(n);
  return b * std::sqrt(ln) / std::pow(std::log(ln), 0.5 - 1.0 / alpha);
}

double typical_heavy(double alpha, double n) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("typical_heavy: requires 0 < alpha < 2");
  if (!(n >= 3.0)) throw DomainError("typical_heavy: requires n >= 3");
  return std::pow(std::log(n), 1.0 / alpha);
}

LightRates light_rates(double delta) {
  if (!(delta > 0.0)) throw DomainError("light_rates: requires delta > 0");
  LightRates r;
  r.upper = (1.0 + delta) * (1.0 + delta) - 1.0;
  if (delta < 1.0) r.lower = 1.0 - (1.0 - delta) * (1.0 - delta);
  return r;
}

double gamma_delta(double alpha, double delta) {
  if (!(alpha > 2.0)) throw DomainError("gamma_delta: requires alpha > 2");
  if (!(delta > -1.0)) throw DomainError("gamma_delta: requires delta > -1");
  return (1.0 + delta) * (1.0 + delta) * (1.0 - 2.0 / alpha);
}

namespace {

void require_f_domain(double alpha, double rho) {
  if (!(alpha > 2.0)) throw DomainError("f_rate: requires alpha > 2");
  if (!(rho > -1.0)) throw DomainError("f_rate: requires rho > -1");
}

}  // namespace

double f_rate(double alpha, double rho, double x) {
  require_f_domain(alpha, rho);
  if (!(x > 0.0)) throw DomainError("f_rate: requires x > 0");
  const double c = std::pow(1.0 + rho, alpha) * (2.0 / (alpha - 2.0)) *
                   std::pow(1.0 - 2.0 / alpha, alpha / 2.0);
  return 1.0 - x - c * std::pow(x, 1.0 - alpha / 2.0);
}

FRateMax f_rate_max(double alpha, double rho) {
  require_f_domain(alpha, rho);
  const double s = (1.0 + rho) * (1.0 + rho);
  return {s * (1.0 - 2.0 / alpha), 1.0 - s};
}

double tree_edge_bound(double theta, double s, double xi) {
  if (!(theta >= 1.0)) throw DomainError("tree_edge_bound: requires theta >= 1");
  if (!(s > 0.0) || !(xi > 0.0)) throw DomainError("tree_edge_bound: requires s, xi > 0");
  if (s < 2.0 * xi) return std::pow(s, 2.0 * theta) / 4.0;
  return std::pow(xi, theta) * std::pow(s - xi, theta);
}

}  // namespace sld
