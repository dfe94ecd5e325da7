#pragma once

#include <map>
#include <span>
#include <vector>

#include "boah/analysis/forest.hpp"

namespace boah::analysis {

/// Exact marginal of one tree over the dimensions in `dims` fixed to
/// `values`: leaves compatible with the query are averaged with weights
/// equal to their extent along the remaining dimensions. Throws
/// DimensionOutOfRange.
double tree_marginal(const RegressionTree& tree, std::span<const std::size_t> dims, std::span<const double> values);

/// Functional ANOVA of a single tree with the uniform measure on [0,1]^d.
class TreeFanova {
 public:
  explicit TreeFanova(const RegressionTree& tree);

  double mean() const noexcept { return mean_; }
  /// Variance of the full prediction, by box integration.
  double total_variance() const noexcept { return total_variance_; }
  /// Variance over [0,1]^|U| of the U-marginal.
  double marginal_variance(const std::vector<std::size_t>& dims) const;
  /// V_U: marginal variance minus all lower-order components.
  double component_variance(const std::vector<std::size_t>& dims);

 private:
  std::vector<FeatureInfo> features_;
  std::vector<LeafBox> leaves_;
  std::vector<std::vector<double>> extents_;
  double mean_ = 0.0;
  double total_variance_ = 0.0;
  std::map<std::vector<std::size_t>, double> components_;
};

struct FanovaResult {
  std::vector<std::size_t> dims;
  double fraction_mean = 0.0;
  double fraction_std = 0.0;  // sample std across trees
  bool degenerate = false;    // every tree has zero total variance
  std::vector<double> per_tree;
};

FanovaResult fanova_importance(const ForestSurrogate& forest, std::vector<std::size_t> dims);

/// Singleton effects for every dimension, and optionally all pairs.
struct FanovaReport {
  std::vector<FanovaResult> singletons;
  std::vector<FanovaResult> pairs;
};
FanovaReport fanova_all(const ForestSurrogate& forest, bool interactions);

inline constexpr std::size_t kLpiGridSize = 20;

/// Local importance of every hyperparameter around `incumbent`: the
/// variance of the forest mean along each coordinate, normalized to sum to
/// one. Throws InvalidIncumbent.
std::vector<double> lpi_all(const ForestSurrogate& forest, const DesignSpace& space, const Configuration& incumbent);
double lpi(const ForestSurrogate& forest, const DesignSpace& space, const Configuration& incumbent, std::size_t hp);

}  // namespace boah::analysis
