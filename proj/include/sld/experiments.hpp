#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sld {

enum class ExperimentKind {
  LlnLight,
  LlnHeavy,
  DegreeLln,
  BoundStress,
  DecompositionStress,
  RateTabulate,
};

std::string to_string(ExperimentKind kind);
/// Accepts the hyphenated names ("lln-light", ...); throws DomainError.
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::LlnLight;
  double alpha = 4.0;
  double d = 2.0;
  double delta = 0.5;
  std::vector<std::size_t> n_list{100000};
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = available parallelism; never affects output

  double tol = 1e-10;
  // Acceptance band for the median statistic; unset means the kind default.
  std::optional<double> band_low;
  std::optional<double> band_high;

  // lln-light
  bool planted_control = true;
  // degree-lln
  std::vector<double> gammas;
  // bound-stress
  std::vector<double> p_grid{0.5, 0.8, 1.0, 1.2, 1.5, 1.8};
  std::size_t max_n = 40;
  // decomposition-stress
  double epsilon = 0.5;
  double d_prime = 2.0;
  double decomp_gamma = 0.1;
  // rate-tabulate
  std::vector<double> alpha_grid{0.5, 1.0, 1.2, 1.5, 1.8};
  std::vector<double> delta_grid{0.1, 0.5, 1.0, 10.0, 100.0, 1000.0};

  std::size_t clique_budget = 1'000'000;

  /// Throws DomainError on invalid combinations.
  void validate() const;
  /// Acceptance band of the kind; for lln-light it is in units of B_alpha.
  std::pair<double, double> band() const;
};

struct TrialRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // key of the trial's random stream
  std::optional<double> lambda1;
  std::optional<double> normalized;
  std::size_t max_degree = 0;
  std::size_t max_clique = 0;
  std::string status = "ok";  // "ok", "nonconverged", "violation", "failed"
  std::vector<std::pair<std::string, double>> extra;

  bool excluded() const { return status == "nonconverged"; }
};

struct Aggregate {
  std::size_t n = 0;
  double t_n = 0.0;  // log n / log log n
  std::size_t count = 0;
  std::size_t excluded = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  std::vector<std::pair<std::string, double>> extra;  // medians of extra fields
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RateRow {
  std::string family;  // light-upper, light-lower, heavy, gaussian
  double alpha = 0.0;
  double delta = 0.0;
  double rate = 0.0;
  int argmin_k = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::vector<Aggregate> aggregates;
  std::vector<std::pair<std::string, double>> predictions;
  std::vector<RateRow> rates;
  std::vector<std::string> violations;  // offending instances as edge lists
  std::vector<Check> checks;
  std::size_t excluded = 0;
  bool valid = true;  // exclusions within 1% of trials

  bool passed() const;
  const Aggregate* aggregate_for(std::size_t n) const;
};

ExperimentReport run_lln_light(const ExperimentConfig& cfg);
ExperimentReport run_lln_heavy(const ExperimentConfig& cfg);
ExperimentReport run_degree_lln(const ExperimentConfig& cfg);
ExperimentReport run_bound_stress(const ExperimentConfig& cfg);
ExperimentReport run_decomposition_stress(const ExperimentConfig& cfg);
ExperimentReport run_rate_tabulate(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Report as JSON (schema_version 1); deterministic byte for byte.
std::string report_json(const ExperimentReport& r);
/// Config echo as JSON, without the thread count.
std::string config_json(const ExperimentConfig& cfg);
/// Per-trial CSV: kind,n,trial,seed,lambda1,normalized,max_degree,max_clique,status.
/// rate-tabulate emits family,alpha,delta,rate,argmin_k instead.
std::string report_csv(const ExperimentReport& r);

}  // namespace sld
