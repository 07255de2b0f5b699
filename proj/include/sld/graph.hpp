#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sld {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;
  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on vertices 0..n-1.
///
/// Edges are stored once with u < v, sorted lexicographically and free of
/// duplicates. Construction through from_edges normalizes arbitrary input.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n) {}

  /// Normalizes orientation and order; rejects self-loops, duplicates and
  /// out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges);

  /// Trusts the caller that edges are already canonical.
  static Graph from_sorted_unchecked(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::vector<std::size_t> degrees() const;
  bool has_edge(Vertex u, Vertex v) const;

  bool operator==(const Graph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Graph with one real weight per edge, aligned with Graph::edges(). Stands
/// for the symmetric matrix with zero diagonal and Z_uv = Z_vu = weight.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(Graph graph, std::vector<double> weights);

  /// Builds from unsorted (edge, weight) pairs; same checks as Graph::from_edges.
  static WeightedGraph from_triplets(std::size_t n, std::vector<Edge> edges,
                                     std::vector<double> weights);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t n() const noexcept { return graph_.n(); }
  std::size_t m() const noexcept { return graph_.m(); }
  std::span<const Edge> edges() const noexcept { return graph_.edges(); }
  std::span<const double> weights() const noexcept { return weights_; }

  bool operator==(const WeightedGraph&) const = default;

 private:
  Graph graph_;
  std::vector<double> weights_;
};

/// Compressed adjacency (both directions) for traversal and matvecs.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<Vertex> targets;
  std::vector<double> values;

  explicit Adjacency(const Graph& g);
  explicit Adjacency(const WeightedGraph& z);

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
  std::size_t degree(Vertex v) const { return offsets[v + 1] - offsets[v]; }
};

// Edge-list text format: header "n m", then one "i j" or "i j w" line per
// edge. Weights are written in shortest round-trip decimal form.
void write_edge_list(std::ostream& os, const Graph& g);
void write_edge_list(std::ostream& os, const WeightedGraph& z);
std::string to_edge_list(const WeightedGraph& z);

/// Parses either flavour; an unweighted file yields unit weights and
/// sets *weighted to false.
WeightedGraph read_edge_list(std::istream& is, bool* weighted = nullptr);

}  // namespace sld
