#include "sld/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sld/clique.hpp"
#include "sld/distributions.hpp"
#include "sld/errors.hpp"
#include "sld/planting.hpp"
#include "sld/randgraph.hpp"
#include "sld/rng.hpp"
#include "sld/spectral.hpp"
#include "sld/variational.hpp"

namespace sld {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kSlack = 1e-9;

double t_n(double n) { return n >= 16.0 ? degree_scale(n) : std::nan(""); }

Stream trial_stream(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
  return Stream(cfg.seed).split(n).split(trial);
}

unsigned worker_count(const ExperimentConfig& cfg, std::size_t jobs) {
  unsigned t = cfg.threads;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs every (n, trial) pair; results come back in (n, trial) order
// whatever the worker count.
std::vector<TrialRecord> run_trials(
    const ExperimentConfig& cfg,
    const std::function<TrialRecord(std::size_t n, std::size_t trial, Stream& rng)>& body) {
  const std::size_t jobs = cfg.n_list.size() * cfg.trials;
  std::vector<TrialRecord> out(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      const std::size_t n = cfg.n_list[i / cfg.trials];
      const std::size_t trial = i % cfg.trials;
      try {
        Stream rng = trial_stream(cfg, n, trial);
        out[i] = body(n, trial, rng);
        out[i].n = n;
        out[i].trial = trial;
        out[i].seed = rng.key();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(cfg, jobs);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double extra_value(const TrialRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.extra) {
    if (k == key) return v;
  }
  return std::nan("");
}

void aggregate(ExperimentReport& rep, const std::vector<std::string>& extra_keys) {
  for (std::size_t n : rep.config.n_list) {
    Aggregate a;
    a.n = n;
    a.t_n = t_n(static_cast<double>(n));
    std::vector<double> stat;
    std::vector<std::vector<double>> extras(extra_keys.size());
    for (const auto& r : rep.records) {
      if (r.n != n) continue;
      if (r.excluded()) {
        ++a.excluded;
        continue;
      }
      if (r.normalized) stat.push_back(*r.normalized);
      for (std::size_t i = 0; i < extra_keys.size(); ++i) {
        const double v = extra_value(r, extra_keys[i]);
        if (!std::isnan(v)) extras[i].push_back(v);
      }
    }
    a.count = stat.size();
    if (!stat.empty()) {
      a.median = quantile(stat, 0.5);
      a.q1 = quantile(stat, 0.25);
      a.q3 = quantile(stat, 0.75);
      a.iqr = a.q3 - a.q1;
    }
    for (std::size_t i = 0; i < extra_keys.size(); ++i) {
      if (!extras[i].empty()) a.extra.emplace_back(extra_keys[i], quantile(extras[i], 0.5));
    }
    rep.excluded += a.excluded;
    rep.aggregates.push_back(std::move(a));
  }
  const double total = static_cast<double>(rep.records.size());
  rep.valid = total == 0.0 || static_cast<double>(rep.excluded) <= 0.01 * total;
  rep.checks.push_back({"exclusions_within_1pct", rep.valid,
                        std::to_string(rep.excluded) + " of " +
                            std::to_string(rep.records.size()) + " trials excluded"});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void band_check(ExperimentReport& rep, const std::string& name, double scale) {
  const auto [lo, hi] = rep.config.band();
  for (const auto& a : rep.aggregates) {
    if (a.count == 0) continue;
    const bool ok = a.median >= lo * scale && a.median <= hi * scale;
    rep.checks.push_back({name + "_n" + std::to_string(a.n), ok,
                          "median " + fmt(a.median) + " in [" + fmt(lo * scale) + ", " +
                              fmt(hi * scale) + "]"});
  }
}

// Pairs i < j of the n grid where |median - target| does not increase.
void trend_check(ExperimentReport& rep, double target) {
  const auto& ag = rep.aggregates;
  if (ag.size() < 2) return;
  std::size_t good = 0, pairs = 0;
  for (std::size_t i = 0; i < ag.size(); ++i) {
    for (std::size_t j = i + 1; j < ag.size(); ++j) {
      ++pairs;
      if (std::abs(ag[j].median - target) <= std::abs(ag[i].median - target)) ++good;
    }
  }
  const std::size_t need = (2 * pairs + 2) / 3;
  rep.checks.push_back({"trend_toward_limit", good >= need,
                        std::to_string(good) + " of " + std::to_string(pairs) +
                            " n-pairs nonincreasing distance"});
}

std::size_t max_degree_of(const Graph& g) {
  const auto deg = g.degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::LlnLight:
      return "lln-light";
    case ExperimentKind::LlnHeavy:
      return "lln-heavy";
    case ExperimentKind::DegreeLln:
      return "degree-lln";
    case ExperimentKind::BoundStress:
      return "bound-stress";
    case ExperimentKind::DecompositionStress:
      return "decomposition-stress";
    case ExperimentKind::RateTabulate:
      return "rate-tabulate";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::LlnLight, ExperimentKind::LlnHeavy, ExperimentKind::DegreeLln,
                 ExperimentKind::BoundStress, ExperimentKind::DecompositionStress,
                 ExperimentKind::RateTabulate}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown experiment kind: " + name);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw DomainError("config: trials must be at least 1");
  if (kind != ExperimentKind::RateTabulate && kind != ExperimentKind::BoundStress) {
    if (n_list.empty()) throw DomainError("config: n_list must be nonempty");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
      if (n_list[i] <= n_list[i - 1]) throw DomainError("config: n_list must be ascending");
    }
    if (n_list.front() < 16) throw DomainError("config: n must be at least 16");
  }
  if (!(tol > 0.0)) throw DomainError("config: tol must be positive");
  switch (kind) {
    case ExperimentKind::LlnLight:
      if (!(alpha > 2.0)) throw DomainError("lln-light: requires alpha > 2");
      break;
    case ExperimentKind::LlnHeavy:
      if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("lln-heavy: requires 0 < alpha < 2");
      break;
    case ExperimentKind::BoundStress:
      if (max_n < 2 || max_n > 60) throw DomainError("bound-stress: max_n must lie in [2, 60]");
      for (double p : p_grid) {
        if (!(p > 0.0 && p < 2.0)) throw DomainError("bound-stress: p must lie in (0, 2)");
      }
      break;
    case ExperimentKind::DecompositionStress:
      if (!(epsilon > 0.0) || !(d_prime > 0.0)) {
        throw DomainError("decomposition-stress: requires epsilon > 0 and d' > 0");
      }
      break;
    default:
      break;
  }
  if (kind == ExperimentKind::LlnLight || kind == ExperimentKind::LlnHeavy ||
      kind == ExperimentKind::DegreeLln) {
    if (!(d > 0.0)) throw DomainError("config: requires d > 0");
  }
}

std::pair<double, double> ExperimentConfig::band() const {
  std::pair<double, double> def{0.0, std::numeric_limits<double>::infinity()};
  switch (kind) {
    case ExperimentKind::LlnLight:
      def = {0.5, 1.6};
      break;
    case ExperimentKind::LlnHeavy:
      def = {0.8, 1.35};
      break;
    case ExperimentKind::DegreeLln:
      def = {0.7, 1.6};
      break;
    default:
      break;
  }
  return {band_low.value_or(def.first), band_high.value_or(def.second)};
}

bool ExperimentReport::passed() const {
  return valid && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Aggregate* ExperimentReport::aggregate_for(std::size_t n) const {
  for (const auto& a : aggregates) {
    if (a.n == n) return &a;
  }
  return nullptr;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ExperimentReport run_lln_light(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::LlnLight) throw DomainError("run_lln_light: wrong kind");
  ExperimentReport rep;
  rep.config = cfg;
  const double b = b_alpha(cfg.alpha);
  rep.predictions.emplace_back("B_alpha", b);
  const auto spec = WeibullSpec::canonical(cfg.alpha);

  rep.records = run_trials(cfg, [&](std::size_t n, std::size_t, Stream& rng) {
    TrialRecord r;
    const double nd = static_cast<double>(n);
    const auto g = sample_er(n, cfg.d, rng);
    const auto z = attach_weights(g, spec, rng);
    const auto res = lambda1_sparse(z, cfg.tol);
    r.lambda1 = res.lambda1;
    r.normalized = res.lambda1 * std::pow(std::log(std::log(nd)), 0.5 - 1.0 / cfg.alpha) /
                   std::sqrt(std::log(nd));
    r.max_degree = max_degree_of(g);
    r.max_clique = max_clique(g, cfg.clique_budget).size;
    r.status = res.converged ? "ok" : "nonconverged";
    if (cfg.planted_control) {
      const auto star = plant_star(cfg.alpha, cfg.delta, nd);
      const auto e = embed(z, star, rng);
      r.extra.emplace_back("planted_lambda1", std::max(e.lambda1_sparse, e.lambda1_certified));
      r.extra.emplace_back("planted_target", star.target);
    }
    return r;
  });

  for (std::size_t n : cfg.n_list) {
    rep.predictions.emplace_back("typical_light_n" + std::to_string(n),
                                 typical_light(cfg.alpha, static_cast<double>(n)));
  }
  aggregate(rep, cfg.planted_control ? std::vector<std::string>{"planted_lambda1"}
                                     : std::vector<std::string>{});
  band_check(rep, "median_in_band", b);
  trend_check(rep, b);
  if (cfg.planted_control) {
    std::size_t ok = 0;
    for (const auto& r : rep.records) {
      if (extra_value(r, "planted_lambda1") >= extra_value(r, "planted_target") - kSlack) ++ok;
    }
    rep.checks.push_back({"planted_control", ok == rep.records.size(),
                          std::to_string(ok) + " of " + std::to_string(rep.records.size()) +
                              " planted samples reach (1+delta) typical_light"});
  }
  return rep;
}

ExperimentReport run_lln_heavy(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::LlnHeavy) throw DomainError("run_lln_heavy: wrong kind");
  ExperimentReport rep;
  rep.config = cfg;
  const auto spec = WeibullSpec::canonical(cfg.alpha);

  rep.records = run_trials(cfg, [&](std::size_t n, std::size_t, Stream& rng) {
    TrialRecord r;
    const double scale = typical_heavy(cfg.alpha, static_cast<double>(n));
    const auto g = sample_er(n, cfg.d, rng);
    const auto z = attach_weights(g, spec, rng);
    const auto res = lambda1_sparse(z, cfg.tol);
    const double top = max_abs_entry(z);
    r.lambda1 = res.lambda1;
    r.normalized = res.lambda1 / scale;
    r.max_degree = max_degree_of(g);
    r.max_clique = max_clique(g, cfg.clique_budget).size;
    r.status = res.converged ? "ok" : "nonconverged";
    r.extra.emplace_back("max_weight_ratio", top / scale);
    r.extra.emplace_back("mechanism", top > 0.0 ? res.lambda1 / top : std::nan(""));
    return r;
  });

  for (std::size_t n : cfg.n_list) {
    rep.predictions.emplace_back("typical_heavy_n" + std::to_string(n),
                                 typical_heavy(cfg.alpha, static_cast<double>(n)));
  }
  rep.predictions.emplace_back("ratio_limit", 1.0);
  aggregate(rep, {"max_weight_ratio", "mechanism"});
  band_check(rep, "median_in_band", 1.0);
  for (const auto& a : rep.aggregates) {
    for (const auto& [k, v] : a.extra) {
      if (k != "mechanism") continue;
      rep.checks.push_back({"mechanism_in_band_n" + std::to_string(a.n), v >= 1.0 && v <= 1.3,
                            "median lambda1/max|Z| " + fmt(v) + " in [1, 1.3]"});
    }
  }
  std::size_t ok = 0;
  for (const auto& r : rep.records) {
    if (r.excluded() || !r.normalized) {
      ++ok;
      continue;
    }
    if (*r.normalized >= extra_value(r, "max_weight_ratio") - kSlack) ++ok;
  }
  rep.checks.push_back({"lambda1_dominates_max_entry", ok == rep.records.size(),
                        std::to_string(ok) + " of " + std::to_string(rep.records.size())});
  return rep;
}

ExperimentReport run_degree_lln(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::DegreeLln) throw DomainError("run_degree_lln: wrong kind");
  ExperimentReport rep;
  rep.config = cfg;
  const auto gammas = cfg.gammas.empty() ? default_gamma_grid() : cfg.gammas;
  rep.config.gammas = gammas;

  rep.records = run_trials(cfg, [&](std::size_t n, std::size_t, Stream& rng) {
    TrialRecord r;
    const double nd = static_cast<double>(n);
    const auto g = sample_er(n, cfg.d, rng);
    const auto deg = g.degrees();
    r.max_degree = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    r.max_clique = max_clique(g, cfg.clique_budget).size;
    r.normalized = static_cast<double>(r.max_degree) / degree_scale(nd);
    for (double gamma : gammas) {
      const std::size_t thr = g_of_gamma(gamma, nd);
      const auto count = static_cast<double>(
          std::count_if(deg.begin(), deg.end(), [&](std::size_t x) { return x >= thr; }));
      r.extra.emplace_back("D_" + fmt(gamma), count);
    }
    return r;
  });

  for (std::size_t n : cfg.n_list) {
    const double nd = static_cast<double>(n);
    rep.predictions.emplace_back("t_n" + std::to_string(n), degree_scale(nd));
    for (double gamma : gammas) {
      rep.predictions.emplace_back("D_" + fmt(gamma) + "_n" + std::to_string(n),
                                   std::pow(nd, 1.0 - gamma));
    }
  }
  std::vector<std::string> keys;
  for (double gamma : gammas) keys.push_back("D_" + fmt(gamma));
  aggregate(rep, keys);
  band_check(rep, "median_in_band", 1.0);

  std::size_t full = 0, monotone = 0;
  for (const auto& r : rep.records) {
    const double nd = static_cast<double>(r.n);
    bool mono = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      const double c = r.extra[i].second;
      if (gammas[i] == 0.0 && c == nd) ++full;
      if (c <= 0.0) continue;
      const double e = std::log(c) / std::log(nd);
      if (e > prev + 1e-12) mono = false;
      prev = e;
    }
    if (mono) ++monotone;
  }
  const bool has_zero = std::find(gammas.begin(), gammas.end(), 0.0) != gammas.end();
  if (has_zero) {
    rep.checks.push_back({"D_0_equals_n", full == rep.records.size(),
                          std::to_string(full) + " of " + std::to_string(rep.records.size())});
  }
  rep.checks.push_back({"D_gamma_exponent_nonincreasing", monotone == rep.records.size(),
                        std::to_string(monotone) + " of " + std::to_string(rep.records.size())});
  return rep;
}

namespace {

WeightedGraph random_instance(std::size_t max_n, Stream& rng) {
  const std::size_t n = 2 + static_cast<std::size_t>(rng.below(max_n - 1));
  const double q = 0.05 + 0.9 * rng.uniform();
  const auto g = sample_er(n, q * static_cast<double>(n), rng);
  static constexpr double kShapes[] = {0.5, 1.0, 2.0, 4.0};
  const auto spec = WeibullSpec::canonical(kShapes[rng.below(4)]);
  const bool nonnegative = rng.coin();
  auto z = attach_weights(g, spec, rng);
  if (!nonnegative) return z;
  std::vector<double> w(z.weights().begin(), z.weights().end());
  for (auto& x : w) x = std::abs(x);
  return WeightedGraph(z.graph(), std::move(w));
}

WeightedGraph restrict_edges(const WeightedGraph& z, const std::vector<std::size_t>& idx) {
  std::vector<Edge> e;
  std::vector<double> w;
  for (std::size_t i : idx) {
    e.push_back(z.edges()[i]);
    w.push_back(z.weights()[i]);
  }
  return WeightedGraph(Graph::from_sorted_unchecked(z.n(), std::move(e)), std::move(w));
}

bool within(double lhs, double rhs) {
  return lhs <= rhs + kSlack * std::max(1.0, std::abs(rhs));
}

}  // namespace

ExperimentReport run_bound_stress(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::BoundStress) throw DomainError("run_bound_stress: wrong kind");
  ExperimentReport rep;
  rep.config = cfg;
  rep.config.n_list = {cfg.max_n};
  ExperimentConfig run_cfg = rep.config;

  std::vector<std::string> offenders(cfg.trials);
  rep.records = run_trials(run_cfg, [&](std::size_t, std::size_t trial, Stream& rng) {
    TrialRecord r;
    const auto z = random_instance(cfg.max_n, rng);
    const double lambda1 = z.m() == 0 ? 0.0 : lambda1_dense(to_dense(z));
    const auto clique = max_clique(z.graph(), cfg.clique_budget);
    r.lambda1 = lambda1;
    r.max_degree = max_degree_of(z.graph());
    r.max_clique = clique.size;
    r.extra.emplace_back("instance_n", static_cast<double>(z.n()));
    std::vector<std::string> failed;

    double tightness = 0.0;
    for (double p : cfg.p_grid) {
      if (z.m() == 0) break;
      const double bound = spectral_lp_bound(z, p, static_cast<int>(std::max<std::size_t>(2, clique.size)));
      if (!within(lambda1, bound)) failed.push_back("lp_bound p=" + fmt(p));
      if (bound > 0.0) tightness = std::max(tightness, lambda1 / bound);
    }
    r.normalized = tightness;

    if (z.m() > 0) {
      if (!within(max_abs_entry(z), lambda1)) failed.push_back("max_entry");

      // Random cover: each edge joins one of three parts, some also a second.
      std::vector<std::vector<std::size_t>> idx(3);
      for (std::size_t i = 0; i < z.m(); ++i) {
        const auto a = rng.below(3);
        idx[a].push_back(i);
        if (rng.below(4) == 0) idx[(a + 1) % 3].push_back(i);
      }
      std::vector<WeightedGraph> parts;
      for (auto& v : idx) {
        std::sort(v.begin(), v.end());
        parts.push_back(restrict_edges(z, v));
      }
      if (!edge_cover_bound_check(z, parts)) failed.push_back("edge_cover");

      // Components: lambda1 is the largest component value.
      const auto labels = component_labels(z.graph());
      std::vector<std::vector<std::size_t>> by_label(z.n());
      for (std::size_t i = 0; i < z.m(); ++i) by_label[labels[z.edges()[i].u]].push_back(i);
      double best = 0.0;
      for (const auto& v : by_label) {
        if (!v.empty()) best = std::max(best, largest_eigenvalue(restrict_edges(z, v)));
      }
      if (std::abs(best - lambda1) > kSlack * std::max(1.0, lambda1)) {
        failed.push_back("vertex_disjoint_max");
      }
    }

    if (!clique.exact) {
      r.status = "failed";
    } else if (!failed.empty()) {
      r.status = "violation";
      std::string what;
      for (const auto& f : failed) what += (what.empty() ? "" : ",") + f;
      offenders[trial] = "# trial " + std::to_string(trial) + ": " + what + "\n" + to_edge_list(z);
    }
    return r;
  });

  std::size_t violations = 0;
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    if (rep.records[i].status == "violation") {
      ++violations;
      rep.violations.push_back(offenders[i]);
    }
  }

  std::size_t equality_cases = 0, equality_ok = 0;
  for (double p : cfg.p_grid) {
    if (!(p > 1.0)) continue;
    for (int k = 2; k <= 5; ++k) {
      ++equality_cases;
      try {
        const auto s = equality_network(p, k);
        const double ratio = s.lambda1 / s.target;
        rep.predictions.emplace_back("equality_ratio_p" + fmt(p) + "_k" + std::to_string(k), ratio);
        ++equality_ok;
      } catch (const ConstructionInvalid& e) {
        rep.predictions.emplace_back("equality_ratio_p" + fmt(p) + "_k" + std::to_string(k),
                                     e.measured());
      }
    }
  }

  aggregate(rep, {});
  rep.checks.push_back({"zero_violations", violations == 0,
                        std::to_string(violations) + " violations in " +
                            std::to_string(rep.records.size()) + " instances"});
  std::size_t inexact = 0;
  for (const auto& r : rep.records) inexact += r.status == "failed";
  rep.checks.push_back({"cliques_exact", inexact == 0, std::to_string(inexact) + " inexact"});
  rep.checks.push_back({"equality_instances_attain_bound", equality_ok == equality_cases,
                        std::to_string(equality_ok) + " of " + std::to_string(equality_cases)});
  return rep;
}

ExperimentReport run_decomposition_stress(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ExperimentKind::DecompositionStress) {
    throw DomainError("run_decomposition_stress: wrong kind");
  }
  ExperimentReport rep;
  rep.config = cfg;

  rep.records = run_trials(cfg, [&](std::size_t n, std::size_t, Stream& rng) {
    TrialRecord r;
    const double nd = static_cast<double>(n);
    const double d = cfg.d_prime / std::pow(std::log(nd), cfg.epsilon);
    const auto g = sample_er(n, d, rng);
    const auto dec = star_decomposition(g, g_of_gamma(cfg.decomp_gamma, nd));
    const std::vector<double> none;
    const auto sr = structure_report(g, none, cfg.clique_budget);
    const std::size_t largest = sr.largest_component();
    const std::size_t nontrivial = std::count_if(
        sr.components.begin(), sr.components.end(), [](const auto& c) { return c.size > 1; });
    std::size_t trees = 0;
    for (const auto& c : sr.components) trees += c.size > 1 && c.tree_excess == -1;
    r.max_degree = sr.max_degree;
    r.max_clique = sr.max_clique;
    r.normalized = static_cast<double>(largest) / (degree_scale(nd) / cfg.epsilon);
    r.status = sr.clique_exact ? "ok" : "failed";
    r.extra.emplace_back("decomposition_success", dec.success ? 1.0 : 0.0);
    r.extra.emplace_back("largest_component", static_cast<double>(largest));
    r.extra.emplace_back("all_trees", trees == nontrivial ? 1.0 : 0.0);
    r.extra.emplace_back("tree_fraction",
                         nontrivial == 0 ? 1.0 : static_cast<double>(trees) / nontrivial);
    return r;
  });

  aggregate(rep, {"largest_component", "tree_fraction"});
  double fitted_c = 0.0;
  for (std::size_t n : cfg.n_list) {
    const double nd = static_cast<double>(n);
    std::size_t total = 0, success = 0, small = 0, all_trees = 0;
    const double cap = 2.0 * degree_scale(nd) / cfg.epsilon;
    for (const auto& r : rep.records) {
      if (r.n != n) continue;
      ++total;
      success += extra_value(r, "decomposition_success") == 1.0;
      small += extra_value(r, "largest_component") <= cap;
      all_trees += extra_value(r, "all_trees") == 1.0;
    }
    const double rate = static_cast<double>(success) / total;
    const double small_rate = static_cast<double>(small) / total;
    const double tree_rate = static_cast<double>(all_trees) / total;
    const double scale = std::pow(std::log(nd), 2.0 * cfg.epsilon);
    fitted_c = std::max(fitted_c, (1.0 - tree_rate) * scale);
    const std::string tag = "_n" + std::to_string(n);
    rep.predictions.emplace_back("component_cap" + tag, cap);
    rep.predictions.emplace_back("decomposition_success_rate" + tag, rate);
    rep.predictions.emplace_back("all_trees_rate" + tag, tree_rate);
    rep.checks.push_back({"decomposition_success_95pct" + tag, rate >= 0.95,
                          "success rate " + fmt(rate)});
    rep.checks.push_back({"component_size_95pct" + tag, small_rate >= 0.95,
                          "largest component <= " + fmt(cap) + " in " + fmt(small_rate)});
  }
  rep.predictions.emplace_back("tree_band_fitted_C", fitted_c);
  return rep;
}

ExperimentReport run_rate_tabulate(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.config = cfg;
  for (double delta : cfg.delta_grid) {
    if (!(delta > 0.0)) throw DomainError("rate-tabulate: delta must be positive");
    const auto light = light_rates(delta);
    rep.rates.push_back({"light-upper", 0.0, delta, light.upper, 0});
    if (light.lower) rep.rates.push_back({"light-lower", 0.0, delta, *light.lower, 0});
  }
  for (double alpha : cfg.alpha_grid) {
    for (double delta : cfg.delta_grid) {
      const auto h = heavy_rate(alpha, delta);
      rep.rates.push_back({"heavy", alpha, delta, h.rate, h.argmin_k});
    }
  }
  for (double delta : cfg.delta_grid) {
    const auto g = gaussian_rate(delta);
    rep.rates.push_back({"gaussian", 2.0, delta, g.rate, g.argmin_k});
  }

  // Heavy argmin stays put in delta while the Gaussian one grows.
  std::vector<double> big;
  for (double delta : cfg.delta_grid) {
    if (delta >= 1.0) big.push_back(delta);
  }
  if (big.size() >= 2) {
    bool heavy_bounded = true;
    for (double alpha : cfg.alpha_grid) {
      if (!(alpha > 1.0)) continue;
      int prev = 0;
      for (double delta : big) {
        const int k = heavy_rate(alpha, delta).argmin_k;
        if (k < prev) heavy_bounded = false;
        prev = k;
      }
      heavy_bounded = heavy_bounded && heavy_rate(alpha, big[big.size() - 2]).argmin_k ==
                                           heavy_rate(alpha, big.back()).argmin_k;
    }
    const int g_first = gaussian_rate(big.front()).argmin_k;
    const int g_last = gaussian_rate(big.back()).argmin_k;
    rep.checks.push_back({"heavy_argmin_bounded", heavy_bounded,
                          "argmin constant over the two largest delta values"});
    rep.checks.push_back({"gaussian_argmin_grows", g_last > g_first,
                          "argmin " + std::to_string(g_first) + " -> " + std::to_string(g_last)});
  }
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::LlnLight:
      return run_lln_light(cfg);
    case ExperimentKind::LlnHeavy:
      return run_lln_heavy(cfg);
    case ExperimentKind::DegreeLln:
      return run_degree_lln(cfg);
    case ExperimentKind::BoundStress:
      return run_bound_stress(cfg);
    case ExperimentKind::DecompositionStress:
      return run_decomposition_stress(cfg);
    case ExperimentKind::RateTabulate:
      return run_rate_tabulate(cfg);
  }
  throw DomainError("unknown experiment kind");
}

namespace {

Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Json pairs_json(const std::vector<std::pair<std::string, double>>& kv) {
  Json j = Json::object();
  for (const auto& [k, v] : kv) j[k] = number_or_null(v);
  return j;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["alpha"] = c.alpha;
  j["d"] = c.d;
  j["delta"] = c.delta;
  j["n_list"] = c.n_list;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  const auto [lo, hi] = c.band();
  j["band"] = {number_or_null(lo), number_or_null(hi)};
  j["planted_control"] = c.planted_control;
  j["gammas"] = c.gammas.empty() ? default_gamma_grid() : c.gammas;
  j["p_grid"] = c.p_grid;
  j["max_n"] = c.max_n;
  j["epsilon"] = c.epsilon;
  j["d_prime"] = c.d_prime;
  j["decomp_gamma"] = c.decomp_gamma;
  j["alpha_grid"] = c.alpha_grid;
  j["delta_grid"] = c.delta_grid;
  j["clique_budget"] = c.clique_budget;
  return j;
}

}  // namespace

std::string config_json(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(2); }

std::string report_json(const ExperimentReport& r) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(r.config.kind);
  j["config"] = config_to_json(r.config);
  j["valid"] = r.valid;
  j["passed"] = r.passed();
  j["excluded"] = r.excluded;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["predictions"] = pairs_json(r.predictions);
  Json ag = Json::array();
  for (const auto& a : r.aggregates) {
    ag.push_back({{"n", a.n},
                  {"t_n", number_or_null(a.t_n)},
                  {"count", a.count},
                  {"excluded", a.excluded},
                  {"median", a.median},
                  {"q1", a.q1},
                  {"q3", a.q3},
                  {"iqr", a.iqr},
                  {"extra_medians", pairs_json(a.extra)}});
  }
  j["aggregates"] = ag;
  Json recs = Json::array();
  for (const auto& t : r.records) {
    recs.push_back({{"n", t.n},
                    {"trial", t.trial},
                    {"seed", t.seed},
                    {"lambda1", number_or_null(t.lambda1)},
                    {"normalized", number_or_null(t.normalized)},
                    {"max_degree", t.max_degree},
                    {"max_clique", t.max_clique},
                    {"status", t.status},
                    {"extra", pairs_json(t.extra)}});
  }
  j["records"] = recs;
  Json rates = Json::array();
  for (const auto& row : r.rates) {
    rates.push_back({{"family", row.family},
                     {"alpha", row.alpha},
                     {"delta", row.delta},
                     {"rate", row.rate},
                     {"argmin_k", row.argmin_k}});
  }
  j["rates"] = rates;
  j["violations"] = r.violations;
  return j.dump(2);
}

namespace {

std::string csv_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

std::string report_csv(const ExperimentReport& r) {
  std::ostringstream os;
  if (r.config.kind == ExperimentKind::RateTabulate) {
    os << "family,alpha,delta,rate,argmin_k\n";
    for (const auto& row : r.rates) {
      os << row.family << ',' << csv_number(row.alpha) << ',' << csv_number(row.delta) << ','
         << csv_number(row.rate) << ',' << row.argmin_k << '\n';
    }
    return os.str();
  }
  os << "kind,n,trial,seed,lambda1,normalized,max_degree,max_clique,status\n";
  const std::string kind = to_string(r.config.kind);
  for (const auto& t : r.records) {
    os << kind << ',' << t.n << ',' << t.trial << ',' << t.seed << ',' << csv_number(t.lambda1)
       << ',' << csv_number(t.normalized) << ',' << t.max_degree << ',' << t.max_clique << ','
       << t.status << '\n';
  }
  return os.str();
}

}  // namespace sld
