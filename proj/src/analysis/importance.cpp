#include "boah/analysis/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boah/error.hpp"
#include "boah/kernels.hpp"

namespace boah::analysis {

namespace {

bool is_degenerate(double variance, double mean) { return variance <= 1e-24 + 1e-12 * mean * mean; }

// Cells of one dimension: intervals between consecutive box boundaries for
// numeric dimensions, single categories otherwise.
struct Cells {
  std::vector<double> bounds;  // numeric: cell c is (bounds[c], bounds[c+1]]
  std::size_t categories = 0;

  std::size_t size() const { return categories > 0 ? categories : bounds.size() - 1; }
  double width(std::size_t c) const {
    return categories > 0 ? 1.0 / static_cast<double>(categories) : bounds[c + 1] - bounds[c];
  }
};

// Odometer step over the product of the index lists; false after the last tuple.
bool advance(std::vector<std::size_t>& pos, const std::vector<std::vector<std::size_t>>& lists) {
  for (std::size_t q = pos.size(); q > 0; --q) {
    if (++pos[q - 1] < lists[q - 1].size()) return true;
    pos[q - 1] = 0;
  }
  return false;
}

}  // namespace

double tree_marginal(const RegressionTree& tree, std::span<const std::size_t> dims, std::span<const double> values) {
  if (dims.size() != values.size()) throw Error(ErrorKind::DimensionMismatch, "one value per marginal dimension");
  for (auto j : dims)
    if (j >= tree.dimension()) throw Error(ErrorKind::DimensionOutOfRange, "dimension " + std::to_string(j));
  double out = 0.0;
  for (const auto& leaf : tree.leaf_boxes()) {
    bool inside = true;
    for (std::size_t q = 0; q < dims.size() && inside; ++q) inside = leaf.contains(dims[q], values[q]);
    if (!inside) continue;
    double w = 1.0;
    for (std::size_t j = 0; j < tree.dimension(); ++j)
      if (std::find(dims.begin(), dims.end(), j) == dims.end()) w *= leaf.extent(j);
    out += leaf.mean * w;
  }
  return out;
}

TreeFanova::TreeFanova(const RegressionTree& tree) : features_(tree.features()), leaves_(tree.leaf_boxes()) {
  const std::size_t d = features_.size();
  extents_.reserve(leaves_.size());
  for (const auto& leaf : leaves_) {
    std::vector<double> e(d);
    for (std::size_t j = 0; j < d; ++j) e[j] = leaf.extent(j);
    extents_.push_back(std::move(e));
  }
  std::vector<double> vol(leaves_.size());
  for (std::size_t l = 0; l < leaves_.size(); ++l)
    vol[l] = std::accumulate(extents_[l].begin(), extents_[l].end(), 1.0, std::multiplies<>());
  for (std::size_t l = 0; l < leaves_.size(); ++l) mean_ += vol[l] * leaves_[l].mean;
  for (std::size_t l = 0; l < leaves_.size(); ++l)
    total_variance_ += vol[l] * (leaves_[l].mean - mean_) * (leaves_[l].mean - mean_);
}

double TreeFanova::marginal_variance(const std::vector<std::size_t>& dims) const {
  const std::size_t d = features_.size();
  for (auto j : dims)
    if (j >= d) throw Error(ErrorKind::DimensionOutOfRange, "dimension " + std::to_string(j));
  if (dims.empty()) return 0.0;

  std::vector<Cells> cells(dims.size());
  for (std::size_t q = 0; q < dims.size(); ++q) {
    const auto j = dims[q];
    if (features_[j].categorical) {
      cells[q].categories = features_[j].categories;
      continue;
    }
    auto& b = cells[q].bounds;
    b = {0.0, 1.0};
    for (const auto& leaf : leaves_) {
      b.push_back(leaf.lower[j]);
      b.push_back(leaf.upper[j]);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }

  std::size_t total_cells = 1;
  for (const auto& c : cells) total_cells *= c.size();
  std::vector<double> marginal(total_cells, 0.0);

  // Each leaf adds its weighted mean to the contiguous block of cells it covers.
  std::vector<std::vector<std::size_t>> covered(dims.size());
  for (std::size_t l = 0; l < leaves_.size(); ++l) {
    const auto& leaf = leaves_[l];
    double w = leaf.mean;
    for (std::size_t j = 0; j < d; ++j)
      if (std::find(dims.begin(), dims.end(), j) == dims.end()) w *= extents_[l][j];
    if (w == 0.0) continue;
    bool empty = false;
    for (std::size_t q = 0; q < dims.size(); ++q) {
      const auto j = dims[q];
      auto& cov = covered[q];
      cov.clear();
      if (cells[q].categories > 0) {
        for (std::size_t c = 0; c < cells[q].categories; ++c)
          if (leaf.categories[j][c]) cov.push_back(c);
      } else {
        const auto& b = cells[q].bounds;
        auto lo = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), leaf.lower[j]) - b.begin());
        auto hi = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), leaf.upper[j]) - b.begin());
        for (std::size_t c = lo; c < hi; ++c) cov.push_back(c);
      }
      empty = empty || cov.empty();
    }
    if (empty) continue;
    std::vector<std::size_t> pos(dims.size(), 0);
    do {
      std::size_t flat = 0;
      for (std::size_t q = 0; q < dims.size(); ++q) flat = flat * cells[q].size() + covered[q][pos[q]];
      marginal[flat] += w;
    } while (advance(pos, covered));
  }

  double variance = 0.0;
  for (std::size_t flat = 0; flat < total_cells; ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    for (std::size_t q = dims.size(); q > 0; --q) {
      const std::size_t c = rem % cells[q - 1].size();
      rem /= cells[q - 1].size();
      w *= cells[q - 1].width(c);
    }
    variance += w * (marginal[flat] - mean_) * (marginal[flat] - mean_);
  }
  return variance;
}

double TreeFanova::component_variance(const std::vector<std::size_t>& dims_in) {
  std::vector<std::size_t> dims = dims_in;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  if (auto it = components_.find(dims); it != components_.end()) return it->second;
  double v = marginal_variance(dims);
  // Subtract every proper non-empty sub-effect.
  const std::size_t k = dims.size();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t q = 0; q < k; ++q)
      if (mask & (std::size_t{1} << q)) sub.push_back(dims[q]);
    v -= component_variance(sub);
  }
  components_[dims] = v;
  return v;
}

FanovaResult fanova_importance(const ForestSurrogate& forest, std::vector<std::size_t> dims) {
  FanovaResult out;
  out.dims = dims;
  const auto& trees = forest.trees();
  out.per_tree.assign(trees.size(), 0.0);
  std::vector<char> degenerate(trees.size(), 0);
  const auto n = static_cast<long>(trees.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < n; ++t) {
    TreeFanova tf(trees[static_cast<std::size_t>(t)]);
    if (is_degenerate(tf.total_variance(), tf.mean())) {
      degenerate[static_cast<std::size_t>(t)] = 1;
      continue;
    }
    out.per_tree[static_cast<std::size_t>(t)] =
        std::max(0.0, tf.component_variance(dims) / tf.total_variance());
  }
  out.degenerate = !trees.empty() && std::all_of(degenerate.begin(), degenerate.end(), [](char c) { return c != 0; });
  const double m = static_cast<double>(trees.size());
  out.fraction_mean = std::accumulate(out.per_tree.begin(), out.per_tree.end(), 0.0) / m;
  if (trees.size() > 1) {
    double ss = 0.0;
    for (double f : out.per_tree) ss += (f - out.fraction_mean) * (f - out.fraction_mean);
    out.fraction_std = std::sqrt(ss / (m - 1.0));
  }
  return out;
}

FanovaReport fanova_all(const ForestSurrogate& forest, bool interactions) {
  FanovaReport report;
  const std::size_t d = forest.dimension();
  for (std::size_t j = 0; j < d; ++j) report.singletons.push_back(fanova_importance(forest, {j}));
  if (interactions)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) report.pairs.push_back(fanova_importance(forest, {a, b}));
  return report;
}

std::vector<double> lpi_all(const ForestSurrogate& forest, const DesignSpace& space, const Configuration& incumbent) {
  const std::size_t d = space.dimension();
  if (forest.dimension() != d) throw Error(ErrorKind::SpaceMismatch, "forest and space dimensions differ");
  if (!space.check_validity(incumbent).empty())
    throw Error(ErrorKind::InvalidIncumbent, "incumbent is not a valid configuration");
  const auto base = space.to_unit_vector(incumbent);

  std::vector<double> variances(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    if (!base.active[j]) continue;
    const auto& hp = space.hyperparameter(j);
    std::vector<double> grid;
    if (hp.is_choice()) {
      for (std::size_t c = 0; c < hp.num_choices(); ++c)
        grid.push_back((static_cast<double>(c) + 0.5) / static_cast<double>(hp.num_choices()));
    } else {
      for (std::size_t g = 0; g < kLpiGridSize; ++g) {
        const double u = static_cast<double>(g) / static_cast<double>(kLpiGridSize - 1);
        grid.push_back(hp.kind == HpKind::integer ? space.encode(j, space.decode(j, u)) : u);
      }
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    std::vector<double> rows;
    rows.reserve(grid.size() * d);
    for (double u : grid) {
      auto row = base.vector;
      row[j] = u;
      rows.insert(rows.end(), row.begin(), row.end());
    }
    std::vector<double> pred(grid.size());
    kernels::forest_predict(forest, rows, pred);
    const double mean = std::accumulate(pred.begin(), pred.end(), 0.0) / static_cast<double>(pred.size());
    double var = 0.0;
    for (double p : pred) var += (p - mean) * (p - mean);
    variances[j] = var / static_cast<double>(pred.size());
  }
  const double total = std::accumulate(variances.begin(), variances.end(), 0.0);
  std::vector<double> out(d, 0.0);
  if (total > 0.0)
    for (std::size_t j = 0; j < d; ++j) out[j] = variances[j] / total;
  return out;
}

double lpi(const ForestSurrogate& forest, const DesignSpace& space, const Configuration& incumbent, std::size_t hp) {
  if (hp >= space.dimension()) throw Error(ErrorKind::DimensionOutOfRange, "hyperparameter " + std::to_string(hp));
  return lpi_all(forest, space, incumbent)[hp];
}

}  // namespace boah::analysis
