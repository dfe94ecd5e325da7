#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boah/run_history.hpp"

namespace boah::analysis {

/// How a unit-cube coordinate is split: numeric dimensions by threshold,
/// categorical ones by category subset (category = floor(u * k)).
struct FeatureInfo {
  bool categorical = false;
  std::size_t categories = 0;
};

std::vector<FeatureInfo> feature_info(const DesignSpace& space);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;             // numeric: x <= threshold goes left
  std::vector<bool> left_categories;  // categorical: membership goes left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double mean = 0.0;
  std::size_t count = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Axis-aligned cell of the unit cube owned by one leaf.
struct LeafBox {
  double mean = 0.0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<bool>> categories;  // empty for numeric dimensions

  /// Fraction of dimension j covered by the box.
  double extent(std::size_t j) const;
  bool contains(std::size_t j, double u) const;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  /// Node 0 is the root.
  RegressionTree(std::vector<TreeNode> nodes, std::vector<FeatureInfo> features);

  double predict(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const std::vector<FeatureInfo>& features() const noexcept { return features_; }
  std::size_t dimension() const noexcept { return features_.size(); }

  /// Disjoint boxes covering [0,1]^d, one per leaf.
  std::vector<LeafBox> leaf_boxes() const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<FeatureInfo> features_;
};

struct ForestParams {
  std::size_t n_trees = 32;
  std::size_t max_depth = 64;
  std::size_t min_leaf = 3;
  bool bootstrap = true;
  double feature_fraction = 0.8;
  std::uint64_t seed = 0;
};

class ForestSurrogate {
 public:
  ForestSurrogate() = default;
  ForestSurrogate(std::vector<RegressionTree> trees, std::vector<FeatureInfo> features, double budget)
      : trees_(std::move(trees)), features_(std::move(features)), budget_(budget) {}

  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  const std::vector<FeatureInfo>& features() const noexcept { return features_; }
  std::size_t dimension() const noexcept { return features_.size(); }
  double budget() const noexcept { return budget_; }

  /// Mean over trees.
  double predict(std::span<const double> x) const;

 private:
  std::vector<RegressionTree> trees_;
  std::vector<FeatureInfo> features_;
  double budget_ = 0.0;
};

/// CART on unit-cube rows `x` (n x d). Trees are fitted independently from
/// per-tree seeds, so the result does not depend on the thread count.
RegressionTree fit_tree(std::span<const std::vector<double>> x, std::span<const double> y,
                        const std::vector<FeatureInfo>& features, const ForestParams& params, std::uint64_t tree_seed);

ForestSurrogate fit_forest(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                           const std::vector<FeatureInfo>& features, const ForestParams& params, double budget = 0.0);

/// Minimum number of records fit_forest accepts for a d-dimensional space.
constexpr std::size_t min_forest_records(std::size_t d) noexcept { return d + 2 > 10 ? d + 2 : 10; }

/// Fits on successful records (imputed unit encodings). Throws NotEnoughData.
ForestSurrogate fit_forest(const std::vector<TrialRecord>& records, const DesignSpace& space,
                           const ForestParams& params);

}  // namespace boah::analysis
