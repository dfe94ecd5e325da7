#include "boah/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "boah/analysis/forest.hpp"
#include "boah/kde.hpp"

namespace boah::kernels {

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

namespace {
bool go_parallel(std::size_t work) { return openmp_enabled() && max_threads() > 1 && work >= kParallelThreshold; }
}  // namespace

void kde_log_density(const Kde& kde, std::span<const double> queries, std::span<double> out) {
  if (go_parallel(out.size() * kde.size())) return omp::kde_log_density(kde, queries, out);
  serial::kde_log_density(kde, queries, out);
}

void gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs, std::span<double> out) {
  if (go_parallel(out.size())) return omp::gower_matrix(space, configs, out);
  serial::gower_matrix(space, configs, out);
}

void forest_predict(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::span<double> out) {
  if (go_parallel(out.size() * forest.trees().size())) return omp::forest_predict(forest, rows, out);
  serial::forest_predict(forest, rows, out);
}

void guttman_transform(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                       std::span<double> out) {
  if (go_parallel(n * n)) return omp::guttman_transform(x, delta, n, dims, out);
  serial::guttman_transform(x, delta, n, dims, out);
}

}  // namespace boah::kernels
