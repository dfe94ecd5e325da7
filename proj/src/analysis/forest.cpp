#include "boah/analysis/forest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "boah/error.hpp"
#include "boah/seeding.hpp"

namespace boah::analysis {

namespace {

std::size_t category_of(double u, std::size_t k) {
  return std::min(static_cast<std::size_t>(std::floor(u * static_cast<double>(k))), k - 1);
}

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  std::vector<bool> left_categories;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const std::vector<double>> x, std::span<const double> y, const std::vector<FeatureInfo>& f,
              const ForestParams& p, std::uint64_t seed)
      : x_(x), y_(y), features_(f), params_(p), rng_(seed) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    nodes_.clear();
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  std::uint32_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0;
    for (auto r : rows) sum += y_[r];
    const double n = static_cast<double>(rows.size());
    nodes_[index].mean = sum / n;
    nodes_[index].count = rows.size();

    if (rows.size() < 2 * params_.min_leaf || depth >= params_.max_depth) return index;
    // Splits are scored on node-centred targets so affine loss transforms
    // select the same splits up to rounding.
    const double mean = nodes_[index].mean;
    double sst = 0.0, lo = y_[rows.front()], hi = lo, centred_total = 0.0;
    for (auto r : rows) {
      const double c = y_[r] - mean;
      sst += c * c;
      centred_total += c;
      lo = std::min(lo, y_[r]);
      hi = std::max(hi, y_[r]);
    }
    if (lo == hi) return index;

    SplitCandidate best = find_split(rows, mean, centred_total);
    if (best.feature < 0 || best.gain <= 1e-12 * sst) return index;

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) (goes_left(best, x_[r]) ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const std::uint32_t l = grow(left_rows, depth + 1);
    const std::uint32_t r = grow(right_rows, depth + 1);
    auto& node = nodes_[index];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left_categories = std::move(best.left_categories);
    node.left = l;
    node.right = r;
    return index;
  }

  bool goes_left(const SplitCandidate& s, const std::vector<double>& row) const {
    const auto& f = features_[static_cast<std::size_t>(s.feature)];
    const double u = row[static_cast<std::size_t>(s.feature)];
    if (f.categorical) return s.left_categories[category_of(u, f.categories)];
    return u <= s.threshold;
  }

  SplitCandidate find_split(const std::vector<std::size_t>& rows, double mean, double total) {
    const std::size_t d = features_.size();
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    const auto m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(params_.feature_fraction * static_cast<double>(d) - 1e-9)), 1, d);
    order.resize(m);
    std::sort(order.begin(), order.end());

    SplitCandidate best;
    const double n = static_cast<double>(rows.size());
    const double base = total * total / n;
    for (std::size_t j : order) {
      if (features_[j].categorical) {
        categorical_split(rows, j, mean, base, total, best);
      } else {
        numeric_split(rows, j, mean, base, total, best);
      }
    }
    return best;
  }

  void numeric_split(const std::vector<std::size_t>& rows, std::size_t j, double mean, double base, double total,
                     SplitCandidate& best) const {
    std::vector<std::pair<double, double>> xy;
    xy.reserve(rows.size());
    for (auto r : rows) xy.emplace_back(x_[r][j], y_[r] - mean);
    std::sort(xy.begin(), xy.end());
    const std::size_t n = xy.size();
    double left = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left += xy[i].second;
      const std::size_t nl = i + 1;
      if (nl < params_.min_leaf || n - nl < params_.min_leaf) continue;
      if (xy[i].first == xy[i + 1].first) continue;
      const double right = total - left;
      const double gain = left * left / static_cast<double>(nl) + right * right / static_cast<double>(n - nl) - base;
      if (gain > best.gain) {
        best.gain = gain;
        best.feature = static_cast<int>(j);
        best.threshold = 0.5 * (xy[i].first + xy[i + 1].first);
        best.left_categories.clear();
      }
    }
  }

  // Sorting categories by mean response makes the best contiguous cut the
  // best subset split for squared error.
  void categorical_split(const std::vector<std::size_t>& rows, std::size_t j, double mean, double base,
                         double total, SplitCandidate& best) const {
    const std::size_t k = features_[j].categories;
    std::vector<double> sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (auto r : rows) {
      const auto c = category_of(x_[r][j], k);
      sums[c] += y_[r] - mean;
      ++counts[c];
    }
    std::vector<std::size_t> present;
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] > 0) present.push_back(c);
    if (present.size() < 2) return;
    std::stable_sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
      return sums[a] / static_cast<double>(counts[a]) < sums[b] / static_cast<double>(counts[b]);
    });
    const std::size_t n = rows.size();
    double left = 0.0;
    std::size_t nl = 0;
    for (std::size_t p = 0; p + 1 < present.size(); ++p) {
      left += sums[present[p]];
      nl += counts[present[p]];
      if (nl < params_.min_leaf || n - nl < params_.min_leaf) continue;
      const double right = total - left;
      const double gain = left * left / static_cast<double>(nl) + right * right / static_cast<double>(n - nl) - base;
      if (gain > best.gain) {
        best.gain = gain;
        best.feature = static_cast<int>(j);
        best.threshold = 0.0;
        std::vector<bool> mask(k, false);
        for (std::size_t q = 0; q <= p; ++q) mask[present[q]] = true;
        // Categories unseen at this node follow the larger side.
        const bool absent_left = nl >= n - nl;
        for (std::size_t c = 0; c < k; ++c)
          if (counts[c] == 0) mask[c] = absent_left;
        best.left_categories = std::move(mask);
      }
    }
  }

  std::span<const std::vector<double>> x_;
  std::span<const double> y_;
  const std::vector<FeatureInfo>& features_;
  const ForestParams& params_;
  std::mt19937_64 rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::vector<FeatureInfo> feature_info(const DesignSpace& space) {
  std::vector<FeatureInfo> out;
  for (const auto& hp : space.hyperparameters()) out.push_back({hp.is_choice(), hp.is_choice() ? hp.num_choices() : 0});
  return out;
}

double LeafBox::extent(std::size_t j) const {
  if (!categories[j].empty()) {
    const auto& c = categories[j];
    return static_cast<double>(std::count(c.begin(), c.end(), true)) / static_cast<double>(c.size());
  }
  return upper[j] - lower[j];
}

bool LeafBox::contains(std::size_t j, double u) const {
  if (!categories[j].empty()) return categories[j][category_of(u, categories[j].size())];
  return (u > lower[j] || (lower[j] == 0.0 && u == 0.0)) && u <= upper[j];
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, std::vector<FeatureInfo> features)
    : nodes_(std::move(nodes)), features_(std::move(features)) {
  if (nodes_.empty()) throw Error(ErrorKind::NotEnoughData, "tree without nodes");
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    const auto j = static_cast<std::size_t>(n.feature);
    const bool left = features_[j].categorical ? n.left_categories[category_of(x[j], features_[j].categories)]
                                               : x[j] <= n.threshold;
    i = left ? n.left : n.right;
  }
  return nodes_[i].mean;
}

std::vector<LeafBox> RegressionTree::leaf_boxes() const {
  const std::size_t d = features_.size();
  LeafBox root;
  root.lower.assign(d, 0.0);
  root.upper.assign(d, 1.0);
  root.categories.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    if (features_[j].categorical) root.categories[j].assign(features_[j].categories, true);

  std::vector<LeafBox> out;
  std::vector<std::pair<std::size_t, LeafBox>> stack{{0, root}};
  while (!stack.empty()) {
    auto [i, box] = std::move(stack.back());
    stack.pop_back();
    const auto& n = nodes_[i];
    if (n.is_leaf()) {
      box.mean = n.mean;
      out.push_back(std::move(box));
      continue;
    }
    const auto j = static_cast<std::size_t>(n.feature);
    LeafBox left = box, right = std::move(box);
    if (features_[j].categorical) {
      for (std::size_t c = 0; c < features_[j].categories; ++c) {
        left.categories[j][c] = left.categories[j][c] && n.left_categories[c];
        right.categories[j][c] = right.categories[j][c] && !n.left_categories[c];
      }
    } else {
      left.upper[j] = std::min(left.upper[j], n.threshold);
      right.lower[j] = std::max(right.lower[j], n.threshold);
    }
    stack.emplace_back(n.right, std::move(right));
    stack.emplace_back(n.left, std::move(left));
  }
  return out;
}

double ForestSurrogate::predict(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : trees_) s += t.predict(x);
  return s / static_cast<double>(trees_.size());
}

RegressionTree fit_tree(std::span<const std::vector<double>> x, std::span<const double> y,
                        const std::vector<FeatureInfo>& features, const ForestParams& params, std::uint64_t tree_seed) {
  std::mt19937_64 rng(tree_seed);
  std::vector<std::size_t> rows(x.size());
  if (params.bootstrap) {
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    for (auto& r : rows) r = pick(rng);
  } else {
    std::iota(rows.begin(), rows.end(), 0);
  }
  TreeBuilder builder(x, y, features, params, mix64(tree_seed));
  return RegressionTree(builder.build(std::move(rows)), features);
}

ForestSurrogate fit_forest(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                           const std::vector<FeatureInfo>& features, const ForestParams& params, double budget) {
  if (x.empty() || x.size() != y.size()) throw Error(ErrorKind::NotEnoughData, "forest needs matching non-empty x/y");
  for (const auto& row : x)
    if (row.size() != features.size()) throw Error(ErrorKind::DimensionMismatch, "row dimension differs");
  if (params.n_trees == 0 || params.min_leaf == 0) throw Error(ErrorKind::ConfigurationError, "invalid forest params");
  std::vector<RegressionTree> trees(params.n_trees);
  const auto n_trees = static_cast<long>(params.n_trees);
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < n_trees; ++t)
    trees[static_cast<std::size_t>(t)] =
        fit_tree(x, y, features, params, combine_seeds({params.seed, static_cast<std::uint64_t>(t)}));
  return ForestSurrogate(std::move(trees), features, budget);
}

ForestSurrogate fit_forest(const std::vector<TrialRecord>& records, const DesignSpace& space,
                           const ForestParams& params) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    x.push_back(space.to_unit_vector(r.config).vector);
    y.push_back(*r.loss);
  }
  const std::size_t needed = min_forest_records(space.dimension());
  if (x.size() < needed)
    throw Error(ErrorKind::NotEnoughData,
                std::to_string(x.size()) + " successful records, need " + std::to_string(needed));
  const double budget = records.empty() ? 0.0 : records.front().budget;
  return fit_forest(x, y, feature_info(space), params, budget);
}

}  // namespace boah::analysis
