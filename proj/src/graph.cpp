#include "sld/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "sld/errors.hpp"

namespace sld {

Graph Graph::from_edges(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u == e.v) throw DomainError("graph: self-loop");
    if (e.u >= n || e.v >= n) throw DomainError("graph: endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw DomainError("graph: duplicate edge");
  }
  return from_sorted_unchecked(n, std::move(edges));
}

Graph Graph::from_sorted_unchecked(std::size_t n, std::vector<Edge> edges) {
  Graph g(n);
  g.edges_ = std::move(edges);
  return g;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

WeightedGraph::WeightedGraph(Graph graph, std::vector<double> weights)
    : graph_(std::move(graph)), weights_(std::move(weights)) {
  if (weights_.size() != graph_.m()) {
    throw DomainError("weighted graph: weight count does not match edge count");
  }
}

WeightedGraph WeightedGraph::from_triplets(std::size_t n, std::vector<Edge> edges,
                                           std::vector<double> weights) {
  if (edges.size() != weights.size()) {
    throw DomainError("weighted graph: weight count does not match edge count");
  }
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  std::vector<Edge> sorted;
  std::vector<double> w;
  sorted.reserve(edges.size());
  w.reserve(edges.size());
  for (auto i : order) {
    sorted.push_back(edges[i]);
    w.push_back(weights[i]);
  }
  return WeightedGraph(Graph::from_edges(n, std::move(sorted)), std::move(w));
}

Adjacency::Adjacency(const Graph& g) : offsets(g.n() + 1, 0) {
  for (const auto& e : g.edges()) {
    ++offsets[e.u + 1];
    ++offsets[e.v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  targets.resize(2 * g.m());
  values.assign(2 * g.m(), 1.0);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : g.edges()) {
    targets[fill[e.u]++] = e.v;
    targets[fill[e.v]++] = e.u;
  }
}

Adjacency::Adjacency(const WeightedGraph& z) : Adjacency(z.graph()) {
  // Same fill order as the unweighted constructor, so replay it for values.
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  const auto edges = z.edges();
  const auto w = z.weights();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    values[fill[edges[i].u]++] = w[i];
    values[fill[edges[i].v]++] = w[i];
  }
}

namespace {

void append_double(std::string& out, double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

}  // namespace

void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.n() << ' ' << g.m() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

void write_edge_list(std::ostream& os, const WeightedGraph& z) {
  os << to_edge_list(z);
}

std::string to_edge_list(const WeightedGraph& z) {
  std::string out;
  out.reserve(32 * (z.m() + 1));
  out += std::to_string(z.n());
  out += ' ';
  out += std::to_string(z.m());
  out += '\n';
  const auto edges = z.edges();
  const auto w = z.weights();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out += std::to_string(edges[i].u);
    out += ' ';
    out += std::to_string(edges[i].v);
    out += ' ';
    append_double(out, w[i]);
    out += '\n';
  }
  return out;
}

WeightedGraph read_edge_list(std::istream& is, bool* weighted) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw DomainError("edge list: missing header");
  std::size_t n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m)) throw DomainError("edge list: malformed header");
  }
  std::vector<Edge> edges;
  std::vector<double> w;
  edges.reserve(m);
  w.reserve(m);
  int fields_seen = -1;
  for (std::size_t i = 0; i < m; ++i) {
    if (!next_line()) throw DomainError("edge list: fewer edges than header");
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto skip = [&] {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    };
    std::uint64_t a = 0, b = 0;
    double x = 1.0;
    skip();
    auto r1 = std::from_chars(p, end, a);
    if (r1.ec != std::errc()) throw DomainError("edge list: bad vertex");
    p = r1.ptr;
    skip();
    auto r2 = std::from_chars(p, end, b);
    if (r2.ec != std::errc()) throw DomainError("edge list: bad vertex");
    p = r2.ptr;
    skip();
    int fields = 2;
    if (p < end) {
      auto r3 = std::from_chars(p, end, x);
      if (r3.ec != std::errc()) throw DomainError("edge list: bad weight");
      p = r3.ptr;
      skip();
      fields = 3;
    }
    if (p != end) throw DomainError("edge list: trailing characters");
    if (fields_seen >= 0 && fields != fields_seen) {
      throw DomainError("edge list: mixed weighted and unweighted lines");
    }
    fields_seen = fields;
    if (a >= n || b >= n) throw DomainError("edge list: endpoint out of range");
    edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
    w.push_back(x);
  }
  if (next_line()) throw DomainError("edge list: more edges than header");
  if (weighted) *weighted = fields_seen != 2;
  return WeightedGraph::from_triplets(n, std::move(edges), std::move(w));
}

}  // namespace sld
