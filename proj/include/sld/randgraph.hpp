#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "sld/clique.hpp"
#include "sld/distributions.hpp"
#include "sld/graph.hpp"
#include "sld/rng.hpp"

namespace sld {

/// Erdos-Renyi graph G(n, d/n), sampled by geometric skipping over the
/// n(n-1)/2 vertex pairs. Requires n >= 2 and 0 < d <= n.
Graph sample_er(std::size_t n, double d, Stream& rng);

/// i.i.d. canonical Weibull weight on every edge, drawn in edge order.
WeightedGraph attach_weights(const Graph& g, const WeibullSpec& spec, Stream& rng);

struct ThresholdSplit {
  WeightedGraph high;  // |w| > threshold
  WeightedGraph low;   // |w| <= threshold
};

ThresholdSplit split_by_threshold(const WeightedGraph& z, double threshold);

/// t_n = log n / log log n.
double degree_scale(double n);

/// g(gamma) = ceil(gamma * log n / log log n). Requires n >= 16.
std::size_t g_of_gamma(double gamma, double n);

/// Default gamma grid {0, 0.1, ..., 1.5}.
std::vector<double> default_gamma_grid();

struct ComponentStats {
  Vertex root;  // smallest vertex in the component
  std::size_t size;
  std::size_t edge_count;
  long tree_excess;  // |E| - |V|; -1 exactly for trees
  std::size_t max_clique;
  bool clique_exact;
};

struct StructureReport {
  std::size_t n = 0;
  std::map<std::size_t, std::size_t> degree_counts;
  std::vector<std::pair<double, std::size_t>> d_gamma_counts;
  std::vector<ComponentStats> components;  // ordered by root
  std::size_t max_degree = 0;
  std::size_t max_clique = 0;
  bool clique_exact = true;

  std::size_t tree_components() const;
  std::size_t largest_component() const;
};

/// Degree profile, |D_gamma| for each requested gamma, and per-component
/// size, edge count, tree excess and exact max clique.
StructureReport structure_report(const Graph& g, std::span<const double> gammas,
                                 std::size_t clique_budget = kDefaultCliqueBudget);

/// Connected components as a label per vertex (label = smallest vertex).
std::vector<Vertex> component_labels(const Graph& g);

struct Star {
  Vertex center;
  std::vector<Vertex> leaves;
};

struct StarDecomposition {
  std::vector<Star> stars;
  Graph remainder;
  std::size_t degree_threshold = 0;
  bool success = false;  // remainder max degree <= degree_threshold
};

/// Splits the edge set into vertex-disjoint stars plus a remainder graph.
///
/// Repeatedly takes the vertex of largest residual degree (lowest index on
/// ties). While that degree exceeds the threshold, an unused vertex becomes a
/// star centre whose leaves are its unused neighbours; neighbours that are
/// themselves too heavy to end up in the remainder are left out so they can
/// centre their own star, unless that would leave the centre with no leaves.
/// Every other residual edge of the centre, and every residual edge of a
/// vertex that is already used, is moved to the remainder.
StarDecomposition star_decomposition(const Graph& g, std::size_t degree_threshold);

}  // namespace sld
