#include "boah/analysis/mds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "boah/error.hpp"
#include "boah/kernels.hpp"

namespace boah::analysis {

namespace {

void validate(std::span<const double> delta, std::size_t n) {
  if (delta.size() != n * n) throw Error(ErrorKind::InvalidDistanceMatrix, "matrix is not n x n");
  if (n < 3) throw Error(ErrorKind::InvalidDistanceMatrix, "need at least 3 points");
  double scale = 0.0;
  for (double v : delta) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::InvalidDistanceMatrix, "entries must be finite and >= 0");
    scale = std::max(scale, v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (delta[i * n + i] != 0.0) throw Error(ErrorKind::InvalidDistanceMatrix, "non-zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(delta[i * n + j] - delta[j * n + i]) > 1e-12 * scale)
        throw Error(ErrorKind::InvalidDistanceMatrix, "matrix is not symmetric");
  }
}

// Torgerson scaling: top eigenvectors of the double-centred squared distances.
std::vector<double> classical_scaling(std::span<const double> delta, std::size_t n, std::size_t dims,
                                      std::uint64_t seed) {
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = -0.5 * delta[i * n + j] * delta[i * n + j];
  const Eigen::VectorXd row_mean = b.rowwise().mean();
  const double grand = row_mean.mean();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) += grand - row_mean(i) - row_mean(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  const auto& values = solver.eigenvalues();  // ascending
  const auto& vectors = solver.eigenvectors();

  std::vector<double> x(n * dims, 0.0);
  bool any = false;
  for (std::size_t k = 0; k < dims && k < n; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(n - 1 - k);
    const double lambda = values(col);
    if (!(lambda > 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff()))) continue;
    any = true;
    Eigen::VectorXd v = vectors.col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    const double s = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) x[i * dims + k] = s * v(static_cast<Eigen::Index>(i));
  }
  if (!any) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : x) v = normal(rng);
  }
  return x;
}

}  // namespace

double raw_stress(std::span<const double> coords, std::span<const double> delta, std::size_t n, std::size_t dims) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double diff = coords[i * dims + k] - coords[j * dims + k];
        d2 += diff * diff;
      }
      const double r = std::sqrt(d2) - delta[i * n + j];
      s += r * r;
    }
  return s;
}

Embedding mds_embed(std::span<const double> delta, std::size_t n, const MdsParams& params) {
  validate(delta, n);
  if (params.dims == 0) throw Error(ErrorKind::ConfigurationError, "embedding needs at least one dimension");
  Embedding out;
  out.n = n;
  out.dims = params.dims;
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) norm += delta[i * n + j] * delta[i * n + j];
  if (norm == 0.0) {
    out.coords.assign(n * params.dims, 0.0);
    out.degenerate = true;
    out.stress_history = {0.0};
    return out;
  }

  std::vector<double> x = classical_scaling(delta, n, params.dims, params.seed);
  std::vector<double> next(x.size());
  double stress = raw_stress(x, delta, n, params.dims) / norm;
  out.stress_history.push_back(stress);
  for (std::size_t it = 0; it < params.max_iter && stress > 0.0; ++it) {
    kernels::guttman_transform(x, delta, n, params.dims, next);
    x.swap(next);
    const double updated = raw_stress(x, delta, n, params.dims) / norm;
    out.stress_history.push_back(updated);
    const bool converged = stress - updated <= params.tol * stress;
    stress = updated;
    if (converged) break;
  }
  out.coords = std::move(x);
  out.stress = stress;
  return out;
}

}  // namespace boah::analysis
