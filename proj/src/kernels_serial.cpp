#include "boah/error.hpp"
#include "boah/kernels.hpp"
#include "kernels_detail.hpp"

namespace boah::kernels::serial {

void kde_log_density(const Kde& kde, std::span<const double> queries, std::span<double> out) {
  const std::size_t d = kde.dimension();
  if (d == 0 || queries.size() != out.size() * d) throw Error(ErrorKind::DimensionMismatch, "query block shape");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::kde_row(kde, queries, i);
}

void gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs, std::span<double> out) {
  const std::size_t n = configs.size();
  if (out.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "distance matrix shape");
  for (std::size_t i = 0; i < n; ++i) detail::gower_row(space, configs, i, out);
}

void forest_predict(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::span<double> out) {
  if (rows.size() != out.size() * forest.dimension()) throw Error(ErrorKind::DimensionMismatch, "row block shape");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::forest_row(forest, rows, i);
}

void guttman_transform(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                       std::span<double> out) {
  for (std::size_t i = 0; i < n; ++i) detail::guttman_row(x, delta, n, dims, i, out);
}

}  // namespace boah::kernels::serial
