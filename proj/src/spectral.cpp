#include "sld/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sld/errors.hpp"
#include "sld/rng.hpp"
#include "sld/variational.hpp"

namespace sld {

Eigen::MatrixXd to_dense(const WeightedGraph& z) {
  const auto n = static_cast<Eigen::Index>(z.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const auto edges = z.edges();
  const auto w = z.weights();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    a(edges[i].u, edges[i].v) = w[i];
    a(edges[i].v, edges[i].u) = w[i];
  }
  return a;
}

namespace {

void check_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DomainError("dense eigensolver: matrix not square");
  if (a.rows() > 2000) throw DomainError("dense eigensolver: limited to n <= 2000");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("dense eigensolver: matrix is not symmetric");
  }
}

}  // namespace

Eigen::VectorXd spectrum_dense(const Eigen::MatrixXd& a) {
  check_symmetric(a);
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("dense eigensolver: no convergence");
  }
  return es.eigenvalues();
}

double lambda1_dense(const Eigen::MatrixXd& a) {
  const auto ev = spectrum_dense(a);
  return ev.size() == 0 ? 0.0 : ev(ev.size() - 1);
}

namespace {

void apply(const Adjacency& adj, const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t n = adj.offsets.size() - 1;
  for (std::size_t v = 0; v < n; ++v) {
    double s = 0.0;
    for (std::size_t k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) {
      s += adj.values[k] * x[adj.targets[k]];
    }
    y[v] = s;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void scale(std::vector<double>& a, double s) {
  for (auto& x : a) x *= s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

SpectralResult lambda1_sparse(const WeightedGraph& z, double tol, std::size_t max_iter) {
  LanczosOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return lambda1_sparse(z, opts);
}

SpectralResult lambda1_sparse(const WeightedGraph& z, const LanczosOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("lambda1_sparse: tol must be positive");
  const std::size_t n = z.n();
  SpectralResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  const Adjacency adj(z);
  double sigma = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double row = 0.0;
    for (std::size_t k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) {
      row += std::abs(adj.values[k]);
    }
    sigma = std::max(sigma, row);
  }
  if (sigma == 0.0) {
    out.lambda1 = 0.0;
    out.converged = true;
    if (opts.want_vector) {
      std::vector<double> e(n, 0.0);
      e[0] = 1.0;
      out.eigvec = std::move(e);
    }
    return out;
  }

  const std::size_t max_iter = opts.max_iter ? opts.max_iter
                                             : std::max<std::size_t>(10 * n, 4 * opts.basis);
  const std::size_t m = std::min(n, std::max<std::size_t>(opts.basis, 2));

  Stream rng(opts.seed);
  std::vector<double> start(n);
  for (auto& x : start) x = 2.0 * rng.uniform() - 1.0;
  scale(start, 1.0 / norm(start));

  std::vector<std::vector<double>> basis(m, std::vector<double>(n));
  std::vector<double> w(n), ritz(n), zr(n);
  std::vector<double> alpha, beta;
  double best_lambda = -std::numeric_limits<double>::infinity();
  std::vector<double> best_vec;
  double best_res = std::numeric_limits<double>::infinity();

  while (out.iterations < max_iter) {
    basis[0] = start;
    alpha.clear();
    beta.clear();
    std::size_t s = 0;
    for (std::size_t j = 0; j < m; ++j) {
      apply(adj, basis[j], w);
      axpy(sigma, basis[j], w);
      ++out.iterations;
      alpha.push_back(dot(basis[j], w));
      // Two passes of classical Gram-Schmidt against the whole cycle basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i <= j; ++i) axpy(-dot(basis[i], w), basis[i], w);
      }
      s = j + 1;
      const double b = norm(w);
      if (j + 1 == m || b <= 1e-13 * sigma) break;
      beta.push_back(b);
      basis[j + 1] = w;
      scale(basis[j + 1], 1.0 / b);
      if (out.iterations >= max_iter) break;
    }

    Eigen::VectorXd diag(s), off(s > 1 ? s - 1 : 0);
    for (std::size_t i = 0; i < s; ++i) diag(i) = alpha[i];
    for (std::size_t i = 0; i + 1 < s; ++i) off(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd coeff = tri.eigenvectors().col(s - 1);

    std::fill(ritz.begin(), ritz.end(), 0.0);
    for (std::size_t i = 0; i < s; ++i) axpy(coeff(i), basis[i], ritz);
    scale(ritz, 1.0 / norm(ritz));

    apply(adj, ritz, zr);
    ++out.iterations;
    const double lambda = dot(ritz, zr);
    axpy(-lambda, ritz, zr);
    const double res = norm(zr);
    // Each cycle's Krylov space contains the previous Ritz vector, so the
    // estimate is nondecreasing and the latest one is the best.
    best_lambda = lambda;
    best_res = res;
    best_vec = ritz;
    if (res <= opts.tol * std::max(1.0, std::abs(lambda))) {
      out.converged = true;
      break;
    }
    start = ritz;
  }
  out.lambda1 = best_lambda;
  out.residual = best_res;
  if (opts.want_vector) out.eigvec = std::move(best_vec);
  return out;
}

double largest_eigenvalue(const WeightedGraph& z) {
  if (z.n() <= 400) return lambda1_dense(to_dense(z));
  const auto r = lambda1_sparse(z, 1e-12);
  return r.lambda1;
}

double star_lambda1(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return std::sqrt(s);
}

double max_abs_entry(const WeightedGraph& z) {
  double m = 0.0;
  for (double w : z.weights()) m = std::max(m, std::abs(w));
  return m;
}

double lp_quasinorm(const WeightedGraph& z, double p) {
  if (!(p > 0.0)) throw DomainError("lp_quasinorm: requires p > 0");
  double s = 0.0;
  for (double w : z.weights()) s += std::pow(std::abs(w), p);
  return std::pow(2.0 * s, 1.0 / p);
}

double spectral_lp_bound(const WeightedGraph& z, double p, int clique_k) {
  if (!(p > 0.0) || !(p < 2.0)) {
    throw DomainError("spectral_lp_bound: requires 0 < p < 2");
  }
  const double norm_p = lp_quasinorm(z, p);
  if (p <= 1.0) return std::pow(2.0, -1.0 / p) * norm_p;
  if (clique_k < 2) throw DomainError("spectral_lp_bound: requires clique_k >= 2");
  const double theta = p / (2.0 * (p - 1.0));
  const double phi_value = phi(theta, clique_k).value;
  return std::pow(phi_value, (p - 1.0) / p) * norm_p;
}

bool edge_cover_bound_check(const WeightedGraph& z, std::span<const WeightedGraph> parts) {
  const auto edges = z.edges();
  const auto w = z.weights();
  std::vector<char> covered(edges.size(), 0);
  double total = 0.0;
  for (const auto& part : parts) {
    if (part.n() != z.n()) throw DomainError("edge cover: part has a different vertex set");
    const auto pe = part.edges();
    const auto pw = part.weights();
    for (std::size_t i = 0; i < pe.size(); ++i) {
      const auto it = std::lower_bound(edges.begin(), edges.end(), pe[i]);
      if (it == edges.end() || *it != pe[i]) {
        throw DomainError("edge cover: part contains an edge not in the graph");
      }
      const auto idx = static_cast<std::size_t>(it - edges.begin());
      if (w[idx] != pw[i]) throw DomainError("edge cover: part weight differs from graph");
      covered[idx] = 1;
    }
    total += largest_eigenvalue(part);
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw DomainError("edge cover: parts do not cover every edge");
  }
  return largest_eigenvalue(z) <= total + 1e-9;
}

}  // namespace sld
