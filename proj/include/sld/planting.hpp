#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sld/graph.hpp"
#include "sld/rng.hpp"

namespace sld {

enum class PlantedKind { Star, Clique, BlockMatrix };

std::string to_string(PlantedKind kind);

/// A small weighted graph on local vertices 0..size()-1 whose largest
/// eigenvalue has been certified with the dense solver.
struct PlantedStructure {
  PlantedKind kind = PlantedKind::Star;
  WeightedGraph local;
  double target = 0.0;        // value the construction promises
  double lambda1 = 0.0;       // dense measurement at construction time
  std::optional<double> cost; // exponent of the planting probability, when defined
  int k1 = 0;
  int k2 = 0;
  double x = 0.0;
  double y = 0.0;
  std::vector<std::pair<std::string, double>> params;

  std::size_t size() const noexcept { return local.n(); }

  /// Same structure with all weights multiplied by c > 0.
  PlantedStructure scaled(double c) const;
};

/// Largest clique size accepted by plant_clique and equality_network.
inline constexpr int kMaxPlantedClique = 256;

/// Matrix attaining lambda1 = phi_{q/2}(k)^((p-1)/p) ||A||_p, q = p/(p-1),
/// built on the support of the two-block maximizer with
/// a_ij = (f_i f_j)^(1/(2(p-1))).
PlantedStructure equality_network(double p, int k);

/// Weights on a k-clique with lambda1 >= (1+delta) (log n)^(1/alpha).
/// For 1 < alpha < 2 this is the equality network for p = alpha rescaled;
/// for alpha <= 1 only k = 2 (one heavy edge) is allowed.
PlantedStructure plant_clique(double alpha, double delta, double n, int k);

/// Star of degree g(gamma_delta) with uniform weights whose lambda1 equals
/// (1+delta) typical_light(alpha, n).
PlantedStructure plant_star(double alpha, double delta, double n);

struct Embedding {
  WeightedGraph graph;
  std::vector<Vertex> vertices;   // host vertex of each local vertex
  std::size_t collisions = 0;     // host edges replaced inside the planted set
  double lambda1_sparse = 0.0;
  double lambda1_certified = 0.0; // Rayleigh quotient of the planted eigenvector
};

/// Places s on distinct random host vertices. Every host edge with both
/// ends in the planted set is replaced, so the planted block is a principal
/// submatrix of the result and lambda1 cannot drop below s.lambda1.
Embedding embed(const WeightedGraph& host, const PlantedStructure& s, Stream& rng);

/// JSON sidecar describing the structure (kind, target, parameters).
std::string sidecar_json(const PlantedStructure& s);

}  // namespace sld
