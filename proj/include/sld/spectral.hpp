#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sld/graph.hpp"

namespace sld {

struct SpectralResult {
  double lambda1 = 0.0;
  std::optional<std::vector<double>> eigvec;
  std::size_t iterations = 0;  // operator applications
  double residual = 0.0;       // ||Z v - lambda1 v||_2
  bool converged = false;
};

struct LanczosOptions {
  double tol = 1e-10;
  std::size_t max_iter = 0;  // 0 selects 10 * n
  std::size_t basis = 40;    // Krylov dimension per restart cycle
  bool want_vector = true;
  std::uint64_t seed = 0x5eed;
};

/// Dense symmetric matrix of the weighted graph.
Eigen::MatrixXd to_dense(const WeightedGraph& z);

/// Largest eigenvalue of a symmetric matrix (n <= 2000) via a dense
/// self-adjoint eigensolver. Throws DomainError on asymmetric input.
double lambda1_dense(const Eigen::MatrixXd& a);

/// Full spectrum in ascending order; same preconditions as lambda1_dense.
Eigen::VectorXd spectrum_dense(const Eigen::MatrixXd& a);

/// Largest signed eigenvalue of the sparse weighted graph.
///
/// Explicitly restarted Lanczos with full reorthogonalization inside each
/// cycle, run on Z + sigma I where sigma is the largest absolute row sum. The
/// shift makes the operator positive semidefinite so the wanted eigenvalue is
/// also the dominant one. Convergence is declared on the true residual of
/// the Ritz vector: ||Z v - lambda v|| <= tol * max(1, |lambda|). On
/// exhaustion of max_iter the best estimate is returned with converged=false.
SpectralResult lambda1_sparse(const WeightedGraph& z, double tol = 1e-10,
                              std::size_t max_iter = 0);
SpectralResult lambda1_sparse(const WeightedGraph& z, const LanczosOptions& opts);

/// Dense oracle for small graphs, sparse solver otherwise.
double largest_eigenvalue(const WeightedGraph& z);

/// Largest eigenvalue of a weighted star: sqrt(sum w^2).
double star_lambda1(std::span<const double> weights);

/// max |w| over edges, 0 when edgeless; a lower bound on lambda1.
double max_abs_entry(const WeightedGraph& z);

/// Entrywise L^p quasinorm over ordered pairs: (2 sum_e |w_e|^p)^(1/p).
double lp_quasinorm(const WeightedGraph& z, double p);

/// Upper bound on lambda1 from the L^p quasinorm.
///
/// For 0 < p <= 1 returns 2^(-1/p) ||Z||_p. For 1 < p < 2 returns
/// phi_theta(k)^((p-1)/p) ||Z||_p with theta = p / (2(p-1)), which is valid
/// when clique_k is at least the clique number of the support.
double spectral_lp_bound(const WeightedGraph& z, double p, int clique_k);

/// Checks lambda1(z) <= sum lambda1(part) + 1e-9 for an edge cover of z.
/// Each part must live on z's vertex set and carry z's weights on its edges;
/// the union of part edges must equal z's edge set.
bool edge_cover_bound_check(const WeightedGraph& z,
                            std::span<const WeightedGraph> parts);

}  // namespace sld
