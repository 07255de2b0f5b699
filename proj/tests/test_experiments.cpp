#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sld/errors.hpp"
#include "sld/experiments.hpp"
#include "sld/randgraph.hpp"
#include "sld/rng.hpp"
#include "sld/variational.hpp"

using namespace sld;

namespace {

const Check* find_check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool check_passed(const ExperimentReport& r, const std::string& name) {
  const auto* c = find_check(r, name);
  INFO("check " << name);
  REQUIRE(c != nullptr);
  INFO(c->detail);
  return c->passed;
}

double prediction(const ExperimentReport& r, const std::string& key) {
  for (const auto& [k, v] : r.predictions)
    if (k == key) return v;
  FAIL("missing prediction " << key);
  return 0.0;
}

double extra(const TrialRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.extra)
    if (k == key) return v;
  return std::nan("");
}

ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.n_list = {500, 2000};
  c.trials = 6;
  c.seed = 99;
  c.threads = 2;
  if (kind == ExperimentKind::LlnHeavy) c.alpha = 1.0;
  if (kind == ExperimentKind::BoundStress) c.trials = 50;
  return c;
}

}  // namespace

TEST_CASE("quantile interpolation") {
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({5}, 0.25) == 5.0);
  CHECK(quantile({4, 1, 3, 2}, 0.25) == 1.75);
  CHECK(quantile({4, 1, 3, 2}, 0.75) == 3.25);
  CHECK(quantile({1, 2, 3}, 0.0) == 1.0);
  CHECK(quantile({1, 2, 3}, 1.0) == 3.0);
  CHECK_THROWS_AS(quantile({}, 0.5), DomainError);
}

TEST_CASE("kind names round trip") {
  for (auto k : {ExperimentKind::LlnLight, ExperimentKind::LlnHeavy, ExperimentKind::DegreeLln,
                 ExperimentKind::BoundStress, ExperimentKind::DecompositionStress,
                 ExperimentKind::RateTabulate}) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
  CHECK(to_string(ExperimentKind::DecompositionStress) == "decomposition-stress");
  CHECK_THROWS_AS(parse_experiment_kind("lln"), DomainError);
}

TEST_CASE("config validation and bands") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.n_list = {};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.n_list = {1000, 100};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = ExperimentConfig{};
  c.alpha = 1.5;
  CHECK_THROWS_AS(run_lln_light(c), DomainError);
  c.kind = ExperimentKind::LlnHeavy;
  c.alpha = 2.5;
  CHECK_THROWS_AS(run_lln_heavy(c), DomainError);
  c = small(ExperimentKind::BoundStress);
  c.p_grid = {1.5, 2.0};
  CHECK_THROWS_AS(run_bound_stress(c), DomainError);

  c = ExperimentConfig{};
  CHECK(c.band() == std::pair{0.5, 1.6});
  c.kind = ExperimentKind::LlnHeavy;
  CHECK(c.band() == std::pair{0.8, 1.35});
  c.kind = ExperimentKind::DegreeLln;
  CHECK(c.band() == std::pair{0.7, 1.6});
  c.band_low = 0.1;
  c.band_high = 0.2;
  CHECK(c.band() == std::pair{0.1, 0.2});
}

TEST_CASE("reports are identical across thread counts") {
  for (auto kind : {ExperimentKind::LlnLight, ExperimentKind::LlnHeavy, ExperimentKind::DegreeLln,
                    ExperimentKind::BoundStress, ExperimentKind::DecompositionStress}) {
    auto c = small(kind);
    c.threads = 1;
    const auto a = run_experiment(c);
    c.threads = 5;
    const auto b = run_experiment(c);
    CAPTURE(to_string(kind));
    CHECK(report_json(a) == report_json(b));
    CHECK(report_csv(a) == report_csv(b));
    c.seed = 100;
    CHECK(report_json(run_experiment(c)) != report_json(a));
  }
}

TEST_CASE("trial streams follow the documented split") {
  const auto c = small(ExperimentKind::LlnHeavy);
  const auto r = run_lln_heavy(c);
  REQUIRE(r.records.size() == c.n_list.size() * c.trials);
  std::size_t i = 0;
  for (std::size_t n : c.n_list) {
    for (std::size_t t = 0; t < c.trials; ++t, ++i) {
      CHECK(r.records[i].n == n);
      CHECK(r.records[i].trial == t);
      CHECK(r.records[i].seed == Stream(c.seed).split(n).split(t).key());
    }
  }
}

TEST_CASE("aggregates are recomputable from records") {
  const auto r = run_lln_light(small(ExperimentKind::LlnLight));
  for (const auto& a : r.aggregates) {
    std::vector<double> v;
    for (const auto& rec : r.records)
      if (rec.n == a.n && !rec.excluded() && rec.normalized) v.push_back(*rec.normalized);
    CHECK(a.count == v.size());
    CHECK(a.median == quantile(v, 0.5));
    CHECK(a.q1 == quantile(v, 0.25));
    CHECK(a.q3 == quantile(v, 0.75));
    CHECK(a.iqr == a.q3 - a.q1);
    CHECK(a.t_n == doctest::Approx(degree_scale(static_cast<double>(a.n))));
  }
  CHECK(r.valid);
  CHECK(check_passed(r, "planted_control"));
  CHECK(prediction(r, "B_alpha") == doctest::Approx(b_alpha(4.0)));
}

TEST_CASE("json and csv layout") {
  const auto r = run_lln_heavy(small(ExperimentKind::LlnHeavy));
  const auto j = nlohmann::json::parse(report_json(r));
  CHECK(j["schema_version"] == 1);
  CHECK(j["config"]["kind"] == "lln-heavy");
  CHECK_FALSE(j["config"].contains("threads"));
  CHECK(j["records"].size() == r.records.size());
  CHECK(j.contains("aggregates"));
  CHECK(j.contains("checks"));
  CHECK(nlohmann::json::parse(config_json(r.config)) == j["config"]);

  std::istringstream csv(report_csv(r));
  std::string header, line;
  std::getline(csv, header);
  CHECK(header == "kind,n,trial,seed,lambda1,normalized,max_degree,max_clique,status");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.rfind("lln-heavy,", 0) == 0);
  }
  CHECK(rows == r.records.size());
}

TEST_CASE("lln heavy bookkeeping") {
  const auto r = run_lln_heavy(small(ExperimentKind::LlnHeavy));
  CHECK(check_passed(r, "lambda1_dominates_max_entry"));
  for (const auto& rec : r.records) {
    REQUIRE(rec.normalized);
    CHECK(*rec.normalized >= extra(rec, "max_weight_ratio") - 1e-9);
    CHECK(extra(rec, "mechanism") >= 1.0 - 1e-9);
  }
}

TEST_CASE("degree lln bookkeeping") {
  auto c = small(ExperimentKind::DegreeLln);
  c.gammas = default_gamma_grid();
  const auto r = run_degree_lln(c);
  CHECK(check_passed(r, "D_0_equals_n"));
  CHECK(check_passed(r, "D_gamma_exponent_nonincreasing"));
  for (const auto& rec : r.records) {
    CHECK(extra(rec, "D_0") == static_cast<double>(rec.n));
    REQUIRE(rec.normalized);
    CHECK(*rec.normalized == doctest::Approx(rec.max_degree / degree_scale(static_cast<double>(rec.n))));
  }
}

TEST_CASE("bound stress on a small batch") {
  const auto r = run_bound_stress(small(ExperimentKind::BoundStress));
  CHECK(check_passed(r, "zero_violations"));
  CHECK(check_passed(r, "cliques_exact"));
  CHECK(check_passed(r, "equality_instances_attain_bound"));
  CHECK(r.violations.empty());
  CHECK(r.records.size() == 50);
}

TEST_CASE("rate tabulation") {
  ExperimentConfig c;
  c.kind = ExperimentKind::RateTabulate;
  const auto r = run_rate_tabulate(c);
  CHECK(check_passed(r, "heavy_argmin_bounded"));
  CHECK(check_passed(r, "gaussian_argmin_grows"));
  bool saw_heavy = false, saw_light = false;
  for (const auto& row : r.rates) {
    if (row.family == "heavy" && row.alpha == 1.5 && row.delta == 0.1) {
      saw_heavy = true;
      CHECK(row.rate == doctest::Approx(std::pow(1.1, 1.5) - 1).epsilon(1e-13));
      CHECK(row.argmin_k == 2);
    }
    if (row.family == "light-upper" && row.delta == 1.0) {
      saw_light = true;
      CHECK(row.rate == 3.0);
    }
  }
  CHECK(saw_heavy);
  CHECK(saw_light);
  std::istringstream csv(report_csv(r));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "family,alpha,delta,rate,argmin_k");
}

TEST_CASE("desk scale: light law of large numbers") {
  ExperimentConfig c;
  c.kind = ExperimentKind::LlnLight;
  c.alpha = 4.0;
  c.d = 2.0;
  c.trials = 50;
  c.n_list = {1000, 10000, 100000};
  const auto r = run_lln_light(c);
  CHECK(r.valid);
  CHECK(check_passed(r, "planted_control"));
  CHECK(check_passed(r, "trend_toward_limit"));
  const auto* a = r.aggregate_for(100000);
  REQUIRE(a != nullptr);
  INFO("median " << a->median << " B_4 " << b_alpha(4.0));
  CHECK(a->median >= 0.5 * b_alpha(4.0));
  CHECK(a->median <= 1.6 * b_alpha(4.0));
}

TEST_CASE("desk scale: heavy law of large numbers") {
  ExperimentConfig c;
  c.kind = ExperimentKind::LlnHeavy;
  c.alpha = 1.0;
  c.d = 2.0;
  c.trials = 50;
  c.n_list = {100000};
  const auto r = run_lln_heavy(c);
  CHECK(r.valid);
  const auto* a = r.aggregate_for(100000);
  REQUIRE(a != nullptr);
  CHECK(a->median >= 0.8);
  CHECK(a->median <= 1.35);
  CHECK(check_passed(r, "mechanism_in_band_n100000"));
  CHECK(check_passed(r, "lambda1_dominates_max_entry"));
}

TEST_CASE("desk scale: maximum degree") {
  ExperimentConfig c;
  c.kind = ExperimentKind::DegreeLln;
  c.d = 2.0;
  c.trials = 20;
  c.n_list = {1000000};
  const auto r = run_degree_lln(c);
  const auto* a = r.aggregate_for(1000000);
  REQUIRE(a != nullptr);
  CHECK(a->median >= 0.7);
  CHECK(a->median <= 1.6);
  CHECK(check_passed(r, "D_0_equals_n"));
  CHECK(check_passed(r, "D_gamma_exponent_nonincreasing"));
}

TEST_CASE("desk scale: sub-critical decomposition") {
  ExperimentConfig c;
  c.kind = ExperimentKind::DecompositionStress;
  c.epsilon = 0.5;
  c.d_prime = 2.0;
  c.trials = 20;
  c.n_list = {100000};
  const auto r = run_decomposition_stress(c);
  CHECK(check_passed(r, "component_size_95pct_n100000"));
  CHECK(check_passed(r, "decomposition_success_95pct_n100000"));
}

TEST_CASE("desk scale: tree components") {
  ExperimentConfig c;
  c.kind = ExperimentKind::DecompositionStress;
  c.epsilon = 0.5;
  c.d_prime = 2.0;
  c.trials = 300;
  c.n_list = {1000, 10000, 100000};
  const auto r = run_decomposition_stress(c);
  const double fitted = prediction(r, "tree_band_fitted_C");
  for (std::size_t n : c.n_list) {
    const double bound = 1.0 - fitted / std::pow(std::log(static_cast<double>(n)), 2.0 * c.epsilon);
    CHECK(prediction(r, "all_trees_rate_n" + std::to_string(n)) >= bound - 1e-12);
    const auto* a = r.aggregate_for(n);
    REQUIRE(a != nullptr);
    double tree_median = 0.0;
    for (const auto& [k, v] : a->extra)
      if (k == "tree_fraction") tree_median = v;
    CHECK(tree_median >= bound);
  }
  CHECK(prediction(r, "all_trees_rate_n100000") > prediction(r, "all_trees_rate_n1000"));
}
