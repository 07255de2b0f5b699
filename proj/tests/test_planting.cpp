#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "sld/errors.hpp"
#include "sld/planting.hpp"
#include "sld/randgraph.hpp"
#include "sld/spectral.hpp"
#include "sld/variational.hpp"

using namespace sld;

namespace {

double param(const PlantedStructure& s, const std::string& key) {
  for (const auto& [k, v] : s.params)
    if (k == key) return v;
  FAIL("missing parameter " << key);
  return 0.0;
}

double certify_ratio(const PlantedStructure& s, double p) {
  const double theta = p / (2.0 * (p - 1.0));
  const double bound = std::pow(phi(theta, s.k1 + s.k2).value, (p - 1) / p) * lp_quasinorm(s.local, p);
  return lambda1_dense(to_dense(s.local)) / bound;
}

}  // namespace

TEST_CASE("equality network") {
  const auto e = equality_network(1.5, 2);
  CHECK(e.kind == PlantedKind::BlockMatrix);
  CHECK(e.local.m() == 1);
  CHECK(certify_ratio(e, 1.5) == doctest::Approx(1.0).epsilon(1e-14));

  for (double p : {1.1, 1.2, 1.5, 1.8}) {
    for (int k : {2, 3, 4, 6, 9}) {
      const auto s = equality_network(p, k);
      const double r = certify_ratio(s, p);
      CAPTURE(p);
      CAPTURE(k);
      CHECK(r >= 1 - 1e-6);
      CHECK(r <= 1 + 1e-10);
      CHECK(std::abs(s.lambda1 - s.target) <= 1e-9 * std::max(1.0, s.target));
    }
  }
  CHECK_THROWS_AS(equality_network(2.0, 3), DomainError);
  CHECK_THROWS_AS(equality_network(1.5, kMaxPlantedClique + 1), BudgetError);
}

TEST_CASE("scaling preserves certification") {
  Stream rng(41);
  const std::vector<PlantedStructure> kinds{equality_network(1.2, 4), plant_clique(1.5, 0.5, 1e4, 3),
                                            plant_star(4.0, 0.5, 1e6)};
  for (const auto& s : kinds) {
    for (int t = 0; t < 3; ++t) {
      const double c = 0.1 + 10.0 * rng.uniform();
      const auto sc = s.scaled(c);
      CHECK(sc.target == doctest::Approx(c * s.target).epsilon(1e-14));
      CHECK(lambda1_dense(to_dense(sc.local)) == doctest::Approx(c * s.lambda1).epsilon(1e-12));
      if (s.kind == PlantedKind::BlockMatrix) {
        const double r = certify_ratio(sc, 1.2);
        CHECK(r >= 1 - 1e-6);
        CHECK(r <= 1 + 1e-10);
      }
    }
  }
}

TEST_CASE("plant clique") {
  const double n = std::exp(10.0);
  const auto single = plant_clique(0.5, 1.0, n, 2);
  REQUIRE(single.local.m() == 1);
  CHECK(single.local.weights()[0] == doctest::Approx(200.0).epsilon(1e-13));
  CHECK(single.lambda1 == doctest::Approx(200.0).epsilon(1e-13));
  CHECK_THROWS_AS(plant_clique(0.5, 1.0, n, 3), DomainError);
  for (double alpha : {0.3, 0.7, 1.0}) CHECK(plant_clique(alpha, 2.0, 1e5, 2).local.m() == 1);

  const auto c = plant_clique(1.5, 0.5, 1e4, 3);
  CHECK(c.kind == PlantedKind::Clique);
  CHECK(c.lambda1 >= 1.5 * std::pow(std::log(1e4), 2.0 / 3.0));
  CHECK(lambda1_dense(to_dense(c.local)) >= 1.5 * std::pow(std::log(1e4), 2.0 / 3.0) * (1 - 1e-12));

  for (double alpha : {1.2, 1.5, 1.8}) {
    for (double delta : {0.1, 1.0, 10.0}) {
      for (int k : {2, 3, 5, 8}) {
        const auto s = plant_clique(alpha, delta, 1e5, k);
        const double beta = alpha / (alpha - 1);
        const double expected = 0.5 * std::pow(1 + delta, alpha) * std::pow(phi(beta / 2, k).value, 1 - alpha);
        REQUIRE(s.cost);
        CHECK(std::abs(*s.cost - expected) <= 1e-8);
        CHECK(std::abs(param(s, "weight_cost") - expected) <= 1e-8 * std::max(1.0, expected));
        CHECK(std::abs(*s.cost + k * (k - 3) / 2.0 - psi(alpha, delta, k)) <= 1e-8 * std::max(1.0, expected));
      }
    }
  }
  CHECK_THROWS_AS(plant_clique(1.5, 0.5, 1e4, kMaxPlantedClique + 1), BudgetError);
}

TEST_CASE("plant star") {
  const auto s = plant_star(4.0, 0.0, 1e6);
  CHECK(s.kind == PlantedKind::Star);
  CHECK(s.size() == 4);
  CHECK(s.local.m() == 3);
  CHECK(s.lambda1 >= typical_light(4.0, 1e6) * (1 - 1e-12));
  const double w = s.local.weights()[0];
  for (double v : s.local.weights()) CHECK(v == w);
  CHECK(star_lambda1(s.local.weights()) == doctest::Approx(std::sqrt(3.0) * w).epsilon(1e-15));

  for (double n : {1e4, 1e6, 1e8}) {
    for (double delta : {0.2, 0.5, 1.0}) {
      const auto st = plant_star(4.0, delta, n);
      const double g = static_cast<double>(st.local.m());
      const double gamma = gamma_delta(4.0, delta);
      const double t_n = degree_scale(n);
      const double ratio = st.local.weights()[0] / std::pow(2.0 / (4.0 - 2.0) * std::log(std::log(n)), 0.25);
      CHECK(ratio == doctest::Approx(std::sqrt(gamma * t_n / g)).epsilon(1e-12));
      CHECK(std::abs(ratio - 1.0) <= 1.0 / g);
      CHECK(std::abs(st.lambda1 - (1 + delta) * typical_light(4.0, n)) <= 1e-9 * st.lambda1);
    }
  }
  CHECK_THROWS_AS(plant_star(2.0, 0.5, 1e6), DomainError);
}

TEST_CASE("embedding") {
  Stream rng(42);
  for (const auto& s : {plant_star(4.0, 0.5, 1e4), equality_network(1.3, 5), plant_clique(1.5, 0.5, 1e4, 3)}) {
    const WeightedGraph empty(Graph(100), {});
    const auto e = embed(empty, s, rng);
    CHECK(e.collisions == 0);
    CHECK(e.graph.m() == s.local.m());
    if (s.kind == PlantedKind::Clique) {
      CHECK(e.lambda1_sparse >= s.target - 1e-9);
    } else {
      CHECK(e.lambda1_sparse == doctest::Approx(s.target).epsilon(1e-9));
    }
  }

  const auto c = plant_clique(1.5, 0.5, 1e4, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Stream r(seed);
    const auto host = attach_weights(sample_er(10000, 2.0, r), WeibullSpec::canonical(1.5), r);
    const auto e = embed(host, c, r);
    CHECK(e.lambda1_sparse >= 1.5 * std::pow(std::log(1e4), 2.0 / 3.0));
    CHECK(e.lambda1_sparse >= c.lambda1 - 1e-9);
    CHECK(e.lambda1_certified >= c.lambda1 - 1e-9);
    // planted block is a verbatim principal submatrix
    for (std::size_t i = 0; i < c.local.m(); ++i) {
      const auto le = c.local.edges()[i];
      Vertex a = e.vertices[le.u], b = e.vertices[le.v];
      if (a > b) std::swap(a, b);
      bool found = false;
      for (std::size_t j = 0; j < e.graph.m(); ++j) {
        if (e.graph.edges()[j] == Edge{a, b}) {
          found = e.graph.weights()[j] == c.local.weights()[i];
          break;
        }
      }
      CHECK(found);
    }
  }
  const WeightedGraph tiny(Graph(2), {});
  CHECK_THROWS_AS(embed(tiny, plant_star(4.0, 0.5, 1e4), rng), DomainError);
}

TEST_CASE("sidecar") {
  const auto s = plant_clique(1.8, 0.5, 1e4, 4);
  REQUIRE(s.size() == 4);
  const auto j = nlohmann::json::parse(sidecar_json(s));
  CHECK(j["kind"] == "clique");
  CHECK(j["n_vertices"] == 4);
  CHECK(j["n_edges"] == 6);
  CHECK(j.contains("target_lambda1"));
  CHECK(j["blocks"].contains("k1"));
  CHECK(to_string(PlantedKind::BlockMatrix) == "block-matrix");
}
