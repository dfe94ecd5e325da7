#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <cmath>
#include <span>

#include "boah/analysis/forest.hpp"
#include "boah/analysis/gower.hpp"
#include "boah/kde.hpp"

namespace boah::kernels::detail {

inline double kde_row(const Kde& kde, std::span<const double> queries, std::size_t i) {
  const std::size_t d = kde.dimension();
  return kde.log_density(queries.subspan(i * d, d));
}

inline double forest_row(const analysis::ForestSurrogate& forest, std::span<const double> rows, std::size_t i) {
  const std::size_t d = forest.dimension();
  return forest.predict(rows.subspan(i * d, d));
}

inline void gower_row(const DesignSpace& space, const std::vector<Configuration>& configs, std::size_t i,
                      std::span<double> out) {
  const std::size_t n = configs.size();
  out[i * n + i] = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) out[i * n + j] = analysis::gower_distance(space, configs[std::min(i, j)], configs[std::max(i, j)]);
}

inline void guttman_row(std::span<const double> x, std::span<const double> delta, std::size_t n, std::size_t dims,
                        std::size_t i, std::span<double> out) {
  for (std::size_t k = 0; k < dims; ++k) out[i * dims + k] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    double d2 = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
      const double diff = x[i * dims + k] - x[j * dims + k];
      d2 += diff * diff;
    }
    if (d2 <= 0.0) continue;
    const double ratio = delta[i * n + j] / std::sqrt(d2);
    for (std::size_t k = 0; k < dims; ++k) out[i * dims + k] += ratio * (x[i * dims + k] - x[j * dims + k]);
  }
  for (std::size_t k = 0; k < dims; ++k) out[i * dims + k] /= static_cast<double>(n);
}

}  // namespace boah::kernels::detail
