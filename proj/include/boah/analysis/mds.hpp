#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace boah::analysis {

struct MdsParams {
  std::size_t dims = 2;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct Embedding {
  std::size_t n = 0;
  std::size_t dims = 0;
  std::vector<double> coords;  // n x dims, row-major
  double stress = 0.0;         // raw stress / sum of squared dissimilarities
  std::vector<double> stress_history;  // initial value first, one entry per iteration after
  bool degenerate = false;             // all dissimilarities zero
};

/// Raw stress sum_{i<j} (|x_i - x_j| - delta_ij)^2.
double raw_stress(std::span<const double> coords, std::span<const double> dissimilarities, std::size_t n,
                  std::size_t dims);

/// SMACOF stress majorization started from classical scaling. Throws
/// InvalidDistanceMatrix unless the matrix is square, symmetric,
/// non-negative, zero on the diagonal and n >= 3.
Embedding mds_embed(std::span<const double> dissimilarities, std::size_t n, const MdsParams& params = {});

}  // namespace boah::analysis
