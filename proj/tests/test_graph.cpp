#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "sld/clique.hpp"
#include "sld/errors.hpp"
#include "sld/graph.hpp"
#include "sld/randgraph.hpp"
#include "sld/rng.hpp"

using namespace sld;

TEST_CASE("graph normalization and validation") {
  const auto g = Graph::from_edges(4, {{2, 1}, {0, 3}, {1, 0}});
  REQUIRE(g.m() == 3);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{0, 3});
  CHECK(g.edges()[2] == Edge{1, 2});
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK(g.degrees() == std::vector<std::size_t>{2, 2, 1, 1});
  CHECK_THROWS_AS(Graph::from_edges(3, {{1, 1}}), DomainError);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph(g, {1.0}), DomainError);
}

TEST_CASE("weighted triplets keep weights with their edges") {
  const auto z = WeightedGraph::from_triplets(3, {{2, 1}, {0, 1}}, {5.0, -2.0});
  CHECK(z.edges()[0] == Edge{0, 1});
  CHECK(z.weights()[0] == -2.0);
  CHECK(z.weights()[1] == 5.0);
}

TEST_CASE("adjacency is symmetric") {
  const auto z = WeightedGraph::from_triplets(4, {{0, 1}, {1, 2}, {1, 3}}, {1.0, 2.0, 3.0});
  const Adjacency adj(z);
  CHECK(adj.degree(1) == 3);
  CHECK(adj.degree(0) == 1);
  double sum = 0.0;
  for (std::size_t i = adj.offsets[1]; i < adj.offsets[2]; ++i) sum += adj.values[i];
  CHECK(sum == 6.0);
}

TEST_CASE("edge list round trip is exact") {
  Stream rng(8);
  const auto g = sample_er(300, 4.0, rng);
  const auto z = attach_weights(g, WeibullSpec::canonical(0.7), rng);
  std::stringstream ss;
  write_edge_list(ss, z);
  bool weighted = false;
  const auto back = read_edge_list(ss, &weighted);
  CHECK(weighted);
  CHECK(back == z);

  std::stringstream plain;
  write_edge_list(plain, g);
  const auto unweighted = read_edge_list(plain, &weighted);
  CHECK_FALSE(weighted);
  CHECK(unweighted.graph() == g);
}

TEST_CASE("edge list parser rejects malformed input") {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_edge_list(is);
  };
  CHECK_NOTHROW(parse("# comment\n3 1\n0 1 2.5\n"));
  CHECK_THROWS(parse("3 2\n0 1\n"));
  CHECK_THROWS(parse("3 2\n0 1 1.0\n1 2\n"));
  CHECK_THROWS(parse("3 1\n0 x\n"));
  CHECK_THROWS(parse("3 1\n0 5\n"));
}

TEST_CASE("max clique on small graphs") {
  CHECK(max_clique(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}})).size == 3);
  CHECK(max_clique(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}})).size == 2);
  CHECK(max_clique(Graph(5)).size == 1);
  std::vector<Edge> k6;
  for (Vertex i = 0; i < 6; ++i)
    for (Vertex j = i + 1; j < 6; ++j) k6.push_back({i, j});
  const auto r = max_clique(Graph::from_edges(8, k6));
  CHECK(r.size == 6);
  CHECK(r.exact);
}

TEST_CASE("max clique equals brute force on 200 random graphs") {
  Stream rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(11);
    const double d = (0.05 + 0.9 * rng.uniform()) * static_cast<double>(n);
    const auto g = sample_er(n, d, rng);
    const auto r = max_clique(g);
    CAPTURE(t);
    CHECK(r.exact);
    CHECK(r.size == oracle::brute_force_clique(g));
  }
}

TEST_CASE("clique budget is reported") {
  Stream rng(4);
  const auto g = sample_er(60, 40.0, rng);
  const auto r = max_clique(g, 5);
  CHECK_FALSE(r.exact);
  CHECK(r.size >= 1);
  CHECK(r.size <= max_clique(g).size);
}
