#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// reference the tests compare against, `omp` splits the outer loop across
// OpenMP threads. Both write each output element from the same arithmetic,
// so results are bitwise identical. The unqualified entry points pick one
// by problem size.

#include <span>
#include <vector>

namespace boah {
class Kde;
class DesignSpace;
class Configuration;
namespace analysis {
class ForestSurrogate;
}
}  // namespace boah

namespace boah::kernels {

/// Threshold (in output elements) below which dispatch stays serial.
inline constexpr std::size_t kParallelThreshold = 256;

int max_threads() noexcept;
bool openmp_enabled() noexcept;

namespace serial {
/// out[i] = log density of query row i (queries are n x d, row-major).
void kde_log_density(const Kde& kde, std::span<const double> queries, std::span<double> out);
/// out is n x n; symmetric with zero diagonal.
void gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs, std::span<double> out);
void forest_predict(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::span<double> out);
/// One SMACOF update with unit weights: out = B(x) x / n.
void guttman_transform(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                       std::span<double> out);
}  // namespace serial

namespace omp {
void kde_log_density(const Kde& kde, std::span<const double> queries, std::span<double> out);
void gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs, std::span<double> out);
void forest_predict(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::span<double> out);
void guttman_transform(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                       std::span<double> out);
}  // namespace omp

void kde_log_density(const Kde& kde, std::span<const double> queries, std::span<double> out);
void gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs, std::span<double> out);
void forest_predict(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::span<double> out);
void guttman_transform(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                       std::span<double> out);

}  // namespace boah::kernels
