#pragma once

#include <vector>

#include "boah/design_space.hpp"

namespace boah::analysis {

/// Mean per-hyperparameter dissimilarity in [0,1]:
///   numeric      |difference of unit encodings|
///   categorical  0 if equal, else 1
///   ordinal      |rank difference| / (k - 1)
///   both inactive 0, exactly one inactive 1.
/// Throws SpaceMismatch.
double gower_distance(const DesignSpace& space, const Configuration& a, const Configuration& b);

/// Symmetric n x n matrix, row-major.
std::vector<double> gower_matrix(const DesignSpace& space, const std::vector<Configuration>& configs);

}  // namespace boah::analysis
