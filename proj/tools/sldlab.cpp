#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sld/clique.hpp"
#include "sld/distributions.hpp"
#include "sld/errors.hpp"
#include "sld/experiments.hpp"
#include "sld/graph.hpp"
#include "sld/planting.hpp"
#include "sld/randgraph.hpp"
#include "sld/rng.hpp"
#include "sld/spectral.hpp"
#include "sld/variational.hpp"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kVerifyFailed = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double alpha = 4.0;
  double delta = 0.5;
  double theta = 1.5;
  int k = 2;
  int k_max = sld::kDefaultRateKMax;
  std::vector<double> n{100000};
  double d = 2.0;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
  double tol = 1e-10;
  std::string in;
  std::string kind;
  std::string suite;
  double epsilon = 0.5;
  double d_prime = 2.0;
  std::size_t max_n = 40;
  std::vector<double> band;
};

std::string digest(const sld::WeightedGraph& z) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : sld::to_edge_list(z)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_sink(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + path);
  f << text;
  if (!f.flush()) throw IoError("cannot write output file: " + path);
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
    throw sld::DomainError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

double single_n(const Options& o) {
  if (o.n.size() != 1) throw sld::DomainError("this command takes a single --n");
  return o.n.front();
}

Json options_json(const Options& o) {
  Json j;
  j["alpha"] = o.alpha;
  j["delta"] = o.delta;
  j["theta"] = o.theta;
  j["k"] = o.k;
  j["k_max"] = o.k_max;
  j["n"] = o.n;
  j["d"] = o.d;
  j["trials"] = o.trials;
  j["seed"] = o.seed;
  j["tol"] = o.tol;
  j["format"] = o.format;
  j["out"] = o.out;
  j["in"] = o.in;
  j["kind"] = o.kind;
  j["suite"] = o.suite;
  j["epsilon"] = o.epsilon;
  j["d_prime"] = o.d_prime;
  j["max_n"] = o.max_n;
  j["band"] = o.band;
  return j;
}

Json envelope(const std::string& command, const Json& config) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["config"] = config;
  return j;
}

Json opt_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Top-level scalars of a result as a one-row CSV with the config echoed in
// a leading comment.
std::string flat_csv(const Json& j) {
  std::string header, row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() || value.is_array()) continue;
    if (!first) {
      header += ',';
      row += ',';
    }
    first = false;
    header += key;
    row += csv_cell(value);
  }
  return "# config: " + j["config"].dump() + "\n" + header + "\n" + row + "\n";
}

int emit(const Options& o, const Json& j) {
  write_sink(o.out, o.format == "csv" ? flat_csv(j) : j.dump(2) + "\n");
  return kOk;
}

int cmd_phi(const Options& o) {
  const auto s = sld::phi(o.theta, o.k, o.tol);
  Json j = envelope("phi", options_json(o));
  j["value"] = s.value;
  j["k1"] = s.k1;
  j["k2"] = s.k2;
  j["x"] = s.x;
  j["y"] = s.y;
  j["support"] = s.support();
  j["upper_bound"] = sld::phi_upper_bound(o.theta);
  j["closed_form"] = opt_number(sld::phi_closed_form(o.theta, o.k));
  return emit(o, j);
}

int cmd_rate(const Options& o) {
  Json j = envelope("rate", options_json(o));
  if (o.alpha > 2.0) {
    const auto r = sld::light_rates(o.delta);
    j["family"] = "light";
    j["rate"] = r.upper;
    j["argmin_k"] = nullptr;
    j["tie"] = false;
    j["lower_rate"] = opt_number(r.lower);
  } else if (o.alpha == 2.0) {
    const auto r = sld::gaussian_rate(o.delta, o.k_max);
    j["family"] = "gaussian";
    j["rate"] = r.rate;
    j["argmin_k"] = r.argmin_k;
    j["tie"] = r.tie;
    j["lower_rate"] = nullptr;
  } else {
    const auto r = sld::heavy_rate(o.alpha, o.delta, o.k_max);
    j["family"] = "heavy";
    j["rate"] = r.rate;
    j["argmin_k"] = r.argmin_k;
    j["tie"] = r.tie;
    j["lower_rate"] = nullptr;
  }
  return emit(o, j);
}

int cmd_typical(const Options& o) {
  const double n = single_n(o);
  Json j = envelope("typical", options_json(o));
  if (o.alpha > 2.0) {
    j["regime"] = "light";
    j["value"] = sld::typical_light(o.alpha, n);
    j["b_alpha"] = sld::b_alpha(o.alpha);
  } else if (o.alpha < 2.0) {
    j["regime"] = "heavy";
    j["value"] = sld::typical_heavy(o.alpha, n);
    j["b_alpha"] = nullptr;
  } else {
    throw sld::DomainError("typical: alpha = 2 is neither regime");
  }
  j["t_n"] = n >= 16.0 ? Json(sld::degree_scale(n)) : Json(nullptr);
  return emit(o, j);
}

int cmd_plant(const Options& o) {
  const double n = single_n(o);
  const std::string kind = o.kind.empty() ? (o.alpha > 2.0 ? "star" : "clique") : o.kind;
  sld::PlantedStructure s;
  if (kind == "star") {
    s = sld::plant_star(o.alpha, o.delta, n);
  } else if (kind == "clique") {
    s = sld::plant_clique(o.alpha, o.delta, n, o.k);
  } else if (kind == "block-matrix") {
    s = sld::equality_network(o.alpha, o.k);
  } else {
    throw sld::DomainError("plant: --kind must be star, clique or block-matrix");
  }
  Json cfg = options_json(o);
  cfg["kind"] = kind;
  Json j = envelope("plant", cfg);
  j["structure"] = Json::parse(sld::sidecar_json(s));
  j["digest"] = digest(s.local);
  if (!o.out.empty()) {
    write_sink(o.out, sld::to_edge_list(s.local));
    write_sink(o.out + ".json", sld::sidecar_json(s) + "\n");
    std::cout << j.dump(2) << "\n";
  } else {
    j["edge_list"] = sld::to_edge_list(s.local);
    std::cout << j.dump(2) << "\n";
  }
  return kOk;
}

int cmd_sample(const Options& o) {
  const auto n = as_count(single_n(o), "--n");
  sld::Stream rng(o.seed);
  const auto g = sld::sample_er(n, o.d, rng);
  const auto z = sld::attach_weights(g, sld::WeibullSpec::canonical(o.alpha), rng);
  if (o.out.empty()) {
    std::cout << sld::to_edge_list(z);
    return kOk;
  }
  write_sink(o.out, sld::to_edge_list(z));
  Json j = envelope("sample", options_json(o));
  j["n_vertices"] = z.n();
  j["n_edges"] = z.m();
  j["digest"] = digest(z);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

sld::ExperimentConfig experiment_config(const Options& o, sld::ExperimentKind kind) {
  sld::ExperimentConfig c;
  c.kind = kind;
  c.alpha = o.alpha;
  c.d = o.d;
  c.delta = o.delta;
  c.n_list.clear();
  for (double v : o.n) c.n_list.push_back(as_count(v, "--n"));
  c.trials = o.trials;
  c.seed = o.seed;
  c.threads = o.threads;
  c.tol = o.tol;
  c.epsilon = o.epsilon;
  c.d_prime = o.d_prime;
  c.max_n = o.max_n;
  if (!o.band.empty()) {
    if (o.band.size() != 2) throw sld::DomainError("--band takes two values");
    c.band_low = o.band[0];
    c.band_high = o.band[1];
  }
  return c;
}

int run_report(const Options& o, const std::string& command, const sld::ExperimentConfig& c) {
  const auto r = sld::run_experiment(c);
  if (o.format == "csv") {
    write_sink(o.out, "# config: " + Json::parse(sld::config_json(c)).dump() + "\n" +
                          sld::report_csv(r));
  } else {
    Json j;
    j["schema_version"] = 1;
    j["command"] = command;
    const Json body = Json::parse(sld::report_json(r));
    for (const auto& [key, value] : body.items()) {
      if (key != "schema_version") j[key] = value;
    }
    write_sink(o.out, j.dump(2) + "\n");
  }
  for (const auto& ch : r.checks) {
    if (!ch.passed) std::cerr << "check failed: " << ch.name << " (" << ch.detail << ")\n";
  }
  return r.passed() ? kOk : kVerifyFailed;
}

int cmd_verify(const Options& o) {
  if (!o.suite.empty()) {
    if (o.suite != "lp-bound") throw sld::DomainError("verify: unknown suite " + o.suite);
    auto c = experiment_config(o, sld::ExperimentKind::BoundStress);
    return run_report(o, "verify", c);
  }
  if (o.in.empty()) throw sld::DomainError("verify: needs --in or --suite");
  std::ifstream f(o.in);
  if (!f) throw IoError("cannot open input file: " + o.in);
  bool weighted = false;
  const auto z = sld::read_edge_list(f, &weighted);

  const auto clique = sld::max_clique(z.graph());
  const double lambda1 = z.m() == 0 ? 0.0 : sld::largest_eigenvalue(z);
  std::size_t violations = 0;
  Json bounds = Json::array();
  for (double p : {0.5, 0.8, 1.0, 1.2, 1.5, 1.8}) {
    if (z.m() == 0) break;
    if (p > 1.0 && !clique.exact) continue;
    const double b = sld::spectral_lp_bound(z, p, static_cast<int>(std::max<std::size_t>(2, clique.size)));
    const bool ok = lambda1 <= b + 1e-9 * std::max(1.0, b);
    violations += !ok;
    bounds.push_back({{"p", p}, {"bound", b}, {"ok", ok}});
  }
  const double top = sld::max_abs_entry(z);
  const bool entry_ok = top <= lambda1 + 1e-9 * std::max(1.0, lambda1);
  violations += !entry_ok;

  Json j = envelope("verify", options_json(o));
  j["n_vertices"] = z.n();
  j["n_edges"] = z.m();
  j["weighted"] = weighted;
  j["digest"] = digest(z);
  j["lambda1"] = lambda1;
  j["max_abs_entry"] = top;
  j["max_clique"] = clique.size;
  j["clique_exact"] = clique.exact;
  j["lp_bounds"] = bounds;
  j["violations"] = violations;
  emit(o, j);
  return violations == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Spectral large-deviation laboratory for sparse Weibull-weighted random graphs"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--alpha", o.alpha, "Weibull shape")->capture_default_str();
  app.add_option("--delta", o.delta, "relative deviation")->capture_default_str();
  app.add_option("--theta", o.theta, "phi exponent")->capture_default_str();
  app.add_option("--k", o.k, "clique size")->capture_default_str();
  app.add_option("--k-max", o.k_max, "largest k in rate minimization")->capture_default_str();
  app.add_option("--n", o.n, "vertex count(s)")->capture_default_str();
  app.add_option("--d", o.d, "average degree")->capture_default_str();
  app.add_option("--trials", o.trials, "trials per n")->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->envname("SPECLDP_SEED")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", o.out, "output path (default stdout)");
  app.add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--tol", o.tol, "solver tolerance")->capture_default_str();
  app.add_option("--in", o.in, "input edge list");
  app.add_option("--kind", o.kind, "experiment kind (report) or structure kind (plant)");
  app.add_option("--suite", o.suite, "verification suite (lp-bound)");
  app.add_option("--epsilon", o.epsilon, "sub-critical exponent")->capture_default_str();
  app.add_option("--d-prime", o.d_prime, "sub-critical density constant")->capture_default_str();
  app.add_option("--max-n", o.max_n, "largest instance in bound stress")->capture_default_str();
  app.add_option("--band", o.band, "acceptance band low high")->expected(2);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"phi", "solve phi_theta(k)"},
      {"rate", "upper-tail rate function"},
      {"typical", "typical largest eigenvalue"},
      {"plant", "build a certified planted structure"},
      {"sample", "sample a weighted sparse random graph"},
      {"verify", "check spectral bounds on a graph or a random suite"},
      {"lln", "law-of-large-numbers experiment"},
      {"decomp", "star decomposition stress experiment"},
      {"report", "run any experiment kind"},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::cerr << "sldlab " << command << " threads=" << o.threads << " seed=" << o.seed << "\n";
  try {
    if (command == "phi") return cmd_phi(o);
    if (command == "rate") return cmd_rate(o);
    if (command == "typical") return cmd_typical(o);
    if (command == "plant") return cmd_plant(o);
    if (command == "sample") return cmd_sample(o);
    if (command == "verify") return cmd_verify(o);
    if (command == "lln") {
      const auto kind = o.alpha > 2.0 ? sld::ExperimentKind::LlnLight : sld::ExperimentKind::LlnHeavy;
      return run_report(o, command, experiment_config(o, kind));
    }
    if (command == "decomp") {
      return run_report(o, command, experiment_config(o, sld::ExperimentKind::DecompositionStress));
    }
    if (command == "report") {
      if (o.kind.empty()) throw sld::DomainError("report: needs --kind");
      return run_report(o, command, experiment_config(o, sld::parse_experiment_kind(o.kind)));
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sld::InsufficientRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sld::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
