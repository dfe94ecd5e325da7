#include "boah/error.hpp"
#include "boah/kernels.hpp"
#include "kernels_detail.hpp"

namespace boah::kernels::omp {

void kde_log_density(const Kde& kde, std::span<const double> queries, std::span<double> out) {
  const std::size_t d = kde.dimension();
  if (d == 0 || queries.size() != out.size() * d) throw Error(ErrorKind::DimensionMismatch, "query block shape");
  const auto n = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = detail::kde_row(kde, queries, static_cast<std::size_t>(i));
}

void gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs, std::span<double> out) {
  const std::size_t n = configs.size();
  if (out.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "distance matrix shape");
  const auto rows = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < rows; ++i) detail::gower_row(space, configs, static_cast<std::size_t>(i), out);
}

void forest_predict(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::span<double> out) {
  if (rows.size() != out.size() * forest.dimension()) throw Error(ErrorKind::DimensionMismatch, "row block shape");
  const auto n = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = detail::forest_row(forest, rows, static_cast<std::size_t>(i));
}

void guttman_transform(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                       std::span<double> out) {
  const auto rows = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) detail::guttman_row(x, delta, n, dims, static_cast<std::size_t>(i), out);
}

}  // namespace boah::kernels::omp
