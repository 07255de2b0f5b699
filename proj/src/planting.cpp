#include "sld/planting.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include <Eigen/Dense>
#include <json.hpp>

#include "sld/errors.hpp"
#include "sld/randgraph.hpp"
#include "sld/spectral.hpp"
#include "sld/variational.hpp"

namespace sld {

namespace {

constexpr double kCertifyRel = 1e-12;
constexpr std::size_t kDenseLimit = 2000;

double param(const PlantedStructure& s, const std::string& key) {
  for (const auto& [k, v] : s.params) {
    if (k == key) return v;
  }
  return std::nan("");
}

// Two-block vector (x,...,x,y,...,y) of length k1 + k2 as a complete
// weighted graph with a_ij = (f_i f_j)^power.
WeightedGraph block_clique(const VariationalSolution& sol, double power) {
  const int s = sol.support();
  std::vector<Edge> edges;
  std::vector<double> weights;
  edges.reserve(static_cast<std::size_t>(s) * (s - 1) / 2);
  weights.reserve(edges.capacity());
  auto f = [&](int i) { return i < sol.k1 ? sol.x : sol.y; };
  for (int i = 0; i < s; ++i) {
    for (int j = i + 1; j < s; ++j) {
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j)});
      weights.push_back(std::pow(f(i) * f(j), power));
    }
  }
  return WeightedGraph::from_triplets(static_cast<std::size_t>(s), std::move(edges),
                                      std::move(weights));
}

WeightedGraph scale_weights(const WeightedGraph& z, double c) {
  std::vector<double> w(z.weights().begin(), z.weights().end());
  for (auto& v : w) v *= c;
  return WeightedGraph(z.graph(), std::move(w));
}

}  // namespace

std::string to_string(PlantedKind kind) {
  switch (kind) {
    case PlantedKind::Star:
      return "star";
    case PlantedKind::Clique:
      return "clique";
    case PlantedKind::BlockMatrix:
      return "block-matrix";
  }
  return "unknown";
}

PlantedStructure PlantedStructure::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaled: requires c > 0");
  PlantedStructure out = *this;
  out.local = scale_weights(local, c);
  out.target = target * c;
  out.lambda1 = lambda1 * c;
  const double alpha = param(*this, "alpha");
  if (cost && std::isfinite(alpha)) {
    out.cost = *cost * std::pow(c, alpha);
  } else {
    out.cost.reset();
  }
  out.params.emplace_back("scale", c);
  return out;
}

PlantedStructure equality_network(double p, int k) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError("equality_network: requires 1 < p < 2");
  if (k < 2) throw DomainError("equality_network: requires k >= 2");
  if (k > kMaxPlantedClique) throw BudgetError("equality_network: k exceeds certification budget");

  const double theta = p / (2.0 * (p - 1.0));
  const auto sol = phi(theta, k);

  PlantedStructure s;
  s.kind = PlantedKind::BlockMatrix;
  s.local = block_clique(sol, 1.0 / (2.0 * (p - 1.0)));
  s.k1 = sol.k1;
  s.k2 = sol.k2;
  s.x = sol.x;
  s.y = sol.y;
  s.target = std::pow(sol.value, (p - 1.0) / p) * lp_quasinorm(s.local, p);
  s.lambda1 = lambda1_dense(to_dense(s.local));
  s.params = {{"p", p}, {"k", k}, {"theta", theta}, {"phi", sol.value}};

  const double ratio = s.lambda1 / s.target;
  if (!(ratio >= 1.0 - 1e-6 && ratio <= 1.0 + 1e-10)) {
    throw ConstructionInvalid("equality_network: lambda1 does not attain the bound", ratio);
  }
  return s;
}

PlantedStructure plant_clique(double alpha, double delta, double n, int k) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("plant_clique: requires 0 < alpha < 2");
  if (!(delta >= 0.0)) throw DomainError("plant_clique: requires delta >= 0");
  if (k < 2) throw DomainError("plant_clique: requires k >= 2");
  if (k > kMaxPlantedClique) throw BudgetError("plant_clique: k exceeds certification budget");
  const double log_n = std::log(n);
  const double target = (1.0 + delta) * typical_heavy(alpha, n);

  PlantedStructure s;
  s.kind = PlantedKind::Clique;
  s.target = target;
  s.params = {{"alpha", alpha}, {"delta", delta}, {"n", n}, {"k", k}};

  if (alpha <= 1.0) {
    if (k != 2) throw DomainError("plant_clique: alpha <= 1 plants a single edge (k = 2)");
    s.local = WeightedGraph::from_triplets(2, {{0, 1}}, {target});
    s.k1 = 2;
    s.x = 0.5;
    s.cost = std::pow(1.0 + delta, alpha);
  } else {
    const auto block = equality_network(alpha, k);
    s.local = scale_weights(block.local, target / block.lambda1);
    s.k1 = block.k1;
    s.k2 = block.k2;
    s.x = block.x;
    s.y = block.y;
    const double phi_value = param(block, "phi");
    s.cost = 0.5 * std::pow(1.0 + delta, alpha) * std::pow(phi_value, 1.0 - alpha);
    s.params.emplace_back("phi", phi_value);
  }

  double weight_cost = 0.0;
  for (double w : s.local.weights()) weight_cost += std::pow(std::abs(w), alpha);
  s.params.emplace_back("weight_cost", weight_cost / log_n);

  s.lambda1 = lambda1_dense(to_dense(s.local));
  if (!(s.lambda1 >= target * (1.0 - kCertifyRel))) {
    throw ConstructionInvalid("plant_clique: certified lambda1 below target", s.lambda1 / target);
  }
  return s;
}

PlantedStructure plant_star(double alpha, double delta, double n) {
  if (!(alpha > 2.0)) throw DomainError("plant_star: requires alpha > 2");
  if (!(delta >= 0.0)) throw DomainError("plant_star: requires delta >= 0");
  const double gamma = gamma_delta(alpha, delta);
  const std::size_t degree = g_of_gamma(gamma, n);
  if (degree == 0) throw DomainError("plant_star: g(gamma_delta) is zero");
  if (degree + 1 > kDenseLimit) throw BudgetError("plant_star: degree exceeds certification budget");

  const double target = (1.0 + delta) * typical_light(alpha, n);
  const double w = std::sqrt(target * target / static_cast<double>(degree));
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= degree; ++i) edges.push_back({0, static_cast<Vertex>(i)});

  PlantedStructure s;
  s.kind = PlantedKind::Star;
  s.local = WeightedGraph::from_triplets(degree + 1, std::move(edges),
                                         std::vector<double>(degree, w));
  s.target = target;
  s.params = {{"alpha", alpha},
              {"delta", delta},
              {"n", n},
              {"gamma", gamma},
              {"degree", static_cast<double>(degree)},
              {"weight", w},
              {"weight_scale",
               std::pow(2.0 / (alpha - 2.0) * std::log(std::log(n)), 1.0 / alpha)}};
  s.lambda1 = lambda1_dense(to_dense(s.local));
  if (std::abs(s.lambda1 - target) > 1e-9 * std::max(1.0, target)) {
    throw ConstructionInvalid("plant_star: lambda1 differs from target", s.lambda1 / target);
  }
  return s;
}

Embedding embed(const WeightedGraph& host, const PlantedStructure& s, Stream& rng) {
  const std::size_t k = s.size();
  const std::size_t n = host.n();
  if (k > n) throw DomainError("embed: host has fewer vertices than the structure");

  Embedding out;
  out.vertices.reserve(k);
  if (2 * k > n) {
    std::vector<Vertex> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<Vertex>(i);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + rng.below(n - i)]);
      out.vertices.push_back(pool[i]);
    }
  } else {
    std::unordered_set<Vertex> seen;
    while (out.vertices.size() < k) {
      const auto v = static_cast<Vertex>(rng.below(n));
      if (seen.insert(v).second) out.vertices.push_back(v);
    }
  }

  constexpr std::int64_t kAbsent = -1;
  std::vector<std::int64_t> local_of(n, kAbsent);
  for (std::size_t i = 0; i < k; ++i) local_of[out.vertices[i]] = static_cast<std::int64_t>(i);

  std::vector<Edge> edges;
  std::vector<double> weights;
  edges.reserve(host.m() + s.local.m());
  weights.reserve(edges.capacity());
  const auto he = host.edges();
  const auto hw = host.weights();
  for (std::size_t i = 0; i < he.size(); ++i) {
    if (local_of[he[i].u] != kAbsent && local_of[he[i].v] != kAbsent) {
      ++out.collisions;
      continue;
    }
    edges.push_back(he[i]);
    weights.push_back(hw[i]);
  }
  const auto pe = s.local.edges();
  const auto pw = s.local.weights();
  for (std::size_t i = 0; i < pe.size(); ++i) {
    edges.push_back({out.vertices[pe[i].u], out.vertices[pe[i].v]});
    weights.push_back(pw[i]);
  }
  out.graph = WeightedGraph::from_triplets(n, std::move(edges), std::move(weights));

  // The planted top eigenvector, padded with zeros, is a test vector for the
  // host matrix; its Rayleigh quotient bounds lambda1 from below.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(s.local));
  const Eigen::VectorXd v = es.eigenvectors().col(es.eigenvalues().size() - 1);
  double rq = 0.0;
  const auto oe = out.graph.edges();
  const auto ow = out.graph.weights();
  for (std::size_t i = 0; i < oe.size(); ++i) {
    const auto a = local_of[oe[i].u];
    const auto b = local_of[oe[i].v];
    if (a != kAbsent && b != kAbsent) rq += 2.0 * ow[i] * v[a] * v[b];
  }
  out.lambda1_certified = rq / v.squaredNorm();
  out.lambda1_sparse = lambda1_sparse(out.graph, 1e-10).lambda1;

  if (std::max(out.lambda1_sparse, out.lambda1_certified) < s.target - 1e-9) {
    throw ConstructionInvalid("embed: lambda1 fell below the planted target",
                              out.lambda1_sparse / s.target);
  }
  return out;
}

std::string sidecar_json(const PlantedStructure& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(s.kind);
  j["n_vertices"] = s.size();
  j["n_edges"] = s.local.m();
  j["target_lambda1"] = s.target;
  j["lambda1"] = s.lambda1;
  j["cost"] = s.cost ? nlohmann::ordered_json(*s.cost) : nlohmann::ordered_json(nullptr);
  j["blocks"] = {{"k1", s.k1}, {"k2", s.k2}, {"x", s.x}, {"y", s.y}};
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : s.params) params[key] = value;
  j["params"] = params;
  return j.dump(2);
}

}  // namespace sld
