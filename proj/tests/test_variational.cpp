#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <future>

#include "oracles.hpp"
#include "sld/errors.hpp"
#include "sld/variational.hpp"

using namespace sld;

TEST_CASE("phi at k = 2") {
  CHECK(phi(1.5, 2).value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(phi(3.0, 2).value == doctest::Approx(1.0 / 32).epsilon(1e-14));
  for (double theta : {1.05, 1.3, 2.0, 4.5}) {
    CHECK(phi(theta, 2).value == doctest::Approx(std::pow(2.0, 1.0 - 2.0 * theta)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(phi(1.0, 3), DomainError);
  CHECK_THROWS_AS(phi(1.5, 1), DomainError);
}

TEST_CASE("phi solution is self-consistent") {
  for (double theta : {1.05, 1.1, 1.25, 1.5, 2.0, 3.0}) {
    for (int k = 2; k <= 20; ++k) {
      const auto s = phi(theta, k);
      CHECK(s.k1 >= 1);
      CHECK(s.k2 >= 0);
      CHECK(s.support() <= k);
      CHECK(s.x >= s.y);
      CHECK(s.k1 * s.x + s.k2 * s.y == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(two_block_objective(theta, s.k1, s.k2, s.x, s.y) - s.value) <= 1e-12);
      CHECK(s.value >= 0.0);
    }
  }
}

TEST_CASE("phi closed forms") {
  CHECK(phi(1.25, 3).value == doctest::Approx(1.0 / std::sqrt(3.0) - std::pow(3.0, -1.5)).epsilon(1e-12));
  CHECK(phi(1.25, 3).value == doctest::Approx(0.3849001794597505).epsilon(1e-12));
  REQUIRE(phi_closed_form(1.5, 2));
  CHECK(*phi_closed_form(1.5, 2) == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(phi_closed_form(1.1, 5));
  CHECK(*phi_closed_form(1.1, 5) == doctest::Approx(0.5798237).epsilon(1e-7));
  CHECK(std::abs(*phi_closed_form(1.1, 5) - phi(1.1, 5).value) <= 1e-6);
  CHECK_FALSE(phi_closed_form(3.0, 3));
  for (double theta : {1.05, 1.1, 1.2, 1.25, 1.5, 2.0, 3.0}) {
    for (int k = 2; k <= 25; ++k) {
      if (const auto c = phi_closed_form(theta, k)) CHECK(std::abs(*c - phi(theta, k).value) <= 1e-8);
    }
  }
}

TEST_CASE("phi matches brute-force oracle") {
  CHECK(phi_oracle(1.5, 2, 10000) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::abs(phi_oracle(2.0, 3, 200) - phi(2.0, 3).value) <= 1e-5);
  CHECK_THROWS_AS(phi_oracle(1.5, 7, 10), BudgetError);
  for (double theta : {1.1, 1.25, 1.5, 2.0, 3.0}) {
    for (int k = 2; k <= 6; ++k) {
      const int grid = k <= 3 ? 300 : (k == 4 ? 60 : (k == 5 ? 30 : 20));
      const double o = phi_oracle(theta, k, grid);
      const double s = phi(theta, k).value;
      CAPTURE(theta);
      CAPTURE(k);
      CHECK(std::abs(o - s) <= 1e-5);
      CHECK(o <= s + 1e-10);
    }
  }
}

TEST_CASE("Motzkin-Straus values") {
  CHECK(phi_motzkin_straus(2) == 0.5);
  CHECK(phi_motzkin_straus(3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (int k = 2; k < 100; ++k) {
    CHECK(phi_motzkin_straus(k + 1) > phi_motzkin_straus(k));
    CHECK(phi_motzkin_straus(k) < 1.0);
  }
}

TEST_CASE("global bound and monotonicity") {
  CHECK(phi_upper_bound(1.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(phi_upper_bound(2.0) == doctest::Approx(4.0 / 27.0).epsilon(1e-15));
  for (double theta : {1.05, 1.1, 1.2, 1.5, 2.0, 3.0}) {
    const auto table = phi_table(theta, 30);
    REQUIRE(table.size() == 29);
    for (std::size_t i = 0; i < table.size(); ++i) {
      CHECK(table[i].k == static_cast<int>(i) + 2);
      CHECK(table[i].value <= phi_upper_bound(theta) + 1e-10);
      CHECK(std::abs(table[i].value - phi(theta, table[i].k).value) <= 1e-15);
      if (i > 0) CHECK(table[i].value >= table[i - 1].value - 1e-10);
    }
  }
}

TEST_CASE("phi cache under concurrent use") {
  std::vector<std::future<double>> jobs;
  for (int t = 0; t < 8; ++t) {
    jobs.push_back(std::async(std::launch::async, [t] {
      double acc = 0.0;
      for (int k = 2; k <= 25; ++k) acc += phi(1.3 + 0.01 * (t % 3), k).value;
      return acc;
    }));
  }
  std::vector<double> out;
  for (auto& j : jobs) out.push_back(j.get());
  for (int t = 3; t < 8; ++t) CHECK(out[t] == out[t % 3]);
}

TEST_CASE("plateau") {
  const auto p15 = phi_plateau(1.5, 30);
  CHECK(p15.found);
  CHECK(p15.k_star == 2);
  CHECK(p15.value == doctest::Approx(phi_upper_bound(1.5)).epsilon(1e-12));

  // (2 theta - 1)/(2 theta - 2) = 6 is an integer: the bound is attained at k = 6
  const auto p11 = phi_plateau(1.1, 30);
  CHECK(p11.found);
  CHECK(p11.k_star <= 30);
  CHECK(p11.k_star == 6);
  CHECK(std::abs(p11.value - phi_upper_bound(1.1)) <= 1e-9);

  // 1.2 gives 3.5, not an integer: the plateau sits strictly below the bound
  const auto p12 = phi_plateau(1.2, 30);
  CHECK(p12.found);
  CHECK(p12.value < phi_upper_bound(1.2) - 1e-9);

  const auto short_range = phi_plateau(1.01, 5);
  CHECK_FALSE(short_range.found);
}

TEST_CASE("psi identities") {
  for (double alpha : {1.1, 1.3, 1.5, 1.7, 1.9}) {
    for (double delta : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      CHECK(std::abs(psi(alpha, delta, 2) - (std::pow(1 + delta, alpha) - 1)) <= 1e-12 * std::pow(1 + delta, alpha));
    }
  }
  CHECK(psi(1.5, 1.0, 2) == doctest::Approx(1.8284271247461903).epsilon(1e-13));
  const double oracle3 = phi_oracle(1.5, 3, 400);
  CHECK(psi(1.5, 0.0, 3) == doctest::Approx(0.5 / std::sqrt(oracle3)).epsilon(1e-5));
  CHECK_THROWS_AS(psi(2.0, 1.0, 3), DomainError);
  CHECK_THROWS_AS(psi(1.0, 1.0, 3), DomainError);
}

TEST_CASE("heavy rate") {
  auto r = heavy_rate(0.5, 1.0);
  CHECK(r.rate == doctest::Approx(0.41421356237309515).epsilon(1e-14));
  CHECK(r.argmin_k == 2);
  r = heavy_rate(1.5, 0.1);
  CHECK(r.rate == doctest::Approx(std::pow(1.1, 1.5) - 1).epsilon(1e-13));
  CHECK(r.argmin_k == 2);

  int prev = 2;
  for (double delta : {1.0, 10.0, 100.0, 1000.0}) {
    const auto h = heavy_rate(1.5, delta);
    CHECK(h.argmin_k >= prev);
    CHECK(h.argmin_k <= 10);
    prev = h.argmin_k;
    // brute-force minimum over a wide range
    double best = INFINITY;
    for (int k = 2; k <= 120; ++k) best = std::min(best, psi(1.5, delta, k));
    CHECK(h.rate == doctest::Approx(best).epsilon(1e-12));
  }

  CHECK_THROWS_AS(heavy_rate(1.98, 1.0, 4), InsufficientRange);
  CHECK_THROWS_AS(heavy_rate(2.0, 1.0), DomainError);
}

TEST_CASE("heavy rate approaches delta as alpha decreases to one") {
  for (double delta : {0.5, 2.0}) {
    double prev = INFINITY;
    for (double alpha : {1.3, 1.1, 1.01}) {
      const double gap = std::abs(heavy_rate(alpha, delta, 200).rate - delta);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(heavy_rate(1.0, delta).rate == doctest::Approx(delta).epsilon(1e-15));
  }
}

TEST_CASE("gaussian comparison") {
  CHECK(gaussian_psi_bar(1.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  for (double delta : {0.3, 7.0, 55.0}) CHECK(gaussian_psi_bar(delta, 2) == doctest::Approx(delta).epsilon(1e-14));
  int prev = 0;
  for (double delta : {1.0, 10.0, 100.0, 1000.0}) {
    const auto g = gaussian_rate(delta, 200);
    CHECK(g.argmin_k > prev);
    prev = g.argmin_k;
    int count = 0;
    for (int k = 2; k <= 200; ++k) count += std::abs(gaussian_psi_bar(delta, k) - g.rate) <= 1e-12;
    CHECK(count <= 2);
    CHECK(g.tie == (count == 2));
  }
  CHECK(prev >= 9);
  CHECK_THROWS_AS(gaussian_rate(1e6, 20), InsufficientRange);
}

TEST_CASE("typical values") {
  CHECK(b_alpha(4.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(b_alpha(2.0), DomainError);
  CHECK_THROWS_AS(typical_light(1.5, 1e6), DomainError);
  const double n = 1e6, ln = std::log(n), lln = std::log(ln);
  double prev = INFINITY;
  for (double alpha : {10.0, 100.0, 1000.0}) {
    const double gap = std::abs(typical_light(alpha, n) / std::sqrt(ln / lln) - 1.0);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.01);
  for (double m = 100; m < 1e9; m *= 3) CHECK(typical_light(4.0, m * 3) > typical_light(4.0, m));
  CHECK(typical_heavy(1.0, std::exp(10.0)) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(typical_heavy(0.5, std::exp(4.0)) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(typical_heavy(0.7, 1e5) > typical_heavy(1.4, 1e5));
}

TEST_CASE("light rates") {
  CHECK(light_rates(1.0).upper == 3.0);
  REQUIRE(light_rates(0.5).lower);
  CHECK(*light_rates(0.5).lower == 0.75);
  CHECK_FALSE(light_rates(1.0).lower);
  CHECK(light_rates(1e-9).upper < 1e-8);
  CHECK(*light_rates(1e-9).lower < 1e-8);
}

TEST_CASE("f rate maximum") {
  auto m = f_rate_max(4.0, 0.0);
  CHECK(m.gamma_star == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(m.max_value) <= 1e-15);
  CHECK(gamma_delta(4.0, 0.0) == 0.5);
  for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
    for (double rho : {-0.5, 0.0, 0.2, 0.5}) {
      m = f_rate_max(alpha, rho);
      const auto [x, fx] = oracle::golden_max([&](double t) { return f_rate(alpha, rho, t); }, 1e-9, 10.0, 1e-13);
      CAPTURE(alpha);
      CAPTURE(rho);
      CHECK(std::abs(x - m.gamma_star) <= 1e-6);
      CHECK(std::abs(fx - m.max_value) <= 1e-8);
      CHECK(m.max_value == doctest::Approx(1 - (1 + rho) * (1 + rho)).epsilon(1e-12));
      CHECK(f_rate(alpha, rho, m.gamma_star) - f_rate(alpha, rho, m.gamma_star + 0.01) > 0);
      CHECK(f_rate(alpha, rho, m.gamma_star) - f_rate(alpha, rho, m.gamma_star - 0.01) > 0);
    }
  }
}

TEST_CASE("tree edge bound") {
  CHECK(tree_edge_bound(1.0, 1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(tree_edge_bound(1.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tree_edge_bound(1.0, 2.0 - 1e-12, 1.0) == doctest::Approx(1.0).epsilon(1e-11));

  Stream rng(31);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(14);
    const auto edges = oracle::random_tree(n, rng);
    const double theta = 1.0 + 2.0 * rng.uniform();
    const double xi = 0.05 + rng.uniform();
    std::vector<double> f(n);
    // random point of {sum f = s, 0 <= f <= xi}: draw, clip, and read off s
    const bool concentrated = rng.uniform() < 0.5;
    for (auto& v : f) v = concentrated && rng.uniform() < 0.3 ? xi : xi * rng.uniform();
    double s = 0.0;
    for (double v : f) s += v;
    double sum = 0.0;
    for (const auto& e : edges) sum += std::pow(f[e.u], theta) * std::pow(f[e.v], theta);
    CAPTURE(t);
    CHECK(sum <= tree_edge_bound(theta, s, xi) * (1 + 1e-12));
  }
}
