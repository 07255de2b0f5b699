#pragma once

#include <cstddef>
#include <span>

#include "sld/graph.hpp"

namespace sld {

struct CliqueResult {
  std::size_t size = 0;
  bool exact = true;  // false when the node budget ran out; size is then a lower bound
  std::size_t nodes = 0;
};

inline constexpr std::size_t kDefaultCliqueBudget = 1'000'000;

/// Maximum clique of the subgraph induced by `vertices`.
///
/// Bron-Kerbosch style branch and bound with Tomita pivoting, started from a
/// degeneracy ordering so that sparse inputs only ever branch on small
/// candidate sets.
CliqueResult max_clique(const Adjacency& adj, std::span<const Vertex> vertices,
                        std::size_t budget = kDefaultCliqueBudget);

/// Maximum clique of the whole graph.
CliqueResult max_clique(const Graph& g, std::size_t budget = kDefaultCliqueBudget);

}  // namespace sld
