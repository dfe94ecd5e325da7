#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "boah/design_space.hpp"

namespace boah {

enum class KernelKind { truncated_gaussian, aitchison_aitken };

inline constexpr double kMinBandwidth = 1e-3;

/// Product-kernel density estimator over the unit cube. Gaussian dimensions
/// are renormalized on [0,1]; categorical dimensions use the Aitchison-Aitken
/// kernel on the bin index of the encoded value.
class Kde {
 public:
  Kde() = default;

  /// `category_counts[j]` is the number of choices for Aitchison-Aitken
  /// dimensions and ignored otherwise. Throws EmptyPointSet,
  /// DimensionMismatch, ComponentOutOfRange.
  static Kde fit(const std::vector<std::vector<double>>& points, std::vector<KernelKind> kinds,
                 std::vector<std::size_t> category_counts);

  std::size_t dimension() const noexcept { return kinds_.size(); }
  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dimension(), dimension()}; }
  const std::vector<double>& bandwidths() const noexcept { return bandwidths_; }
  const std::vector<KernelKind>& kinds() const noexcept { return kinds_; }
  const std::vector<std::size_t>& category_counts() const noexcept { return category_counts_; }

  /// Throws DimensionMismatch.
  double log_density(std::span<const double> x) const;
  double density(std::span<const double> x) const;

  /// One draw from the estimator with every bandwidth scaled by `factor`.
  std::vector<double> sample(std::mt19937_64& rng, double factor) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> points_;    // n x d, row-major
  std::vector<double> log_norm_;  // n x d, log of the truncated-Gaussian mass on [0,1]
  std::vector<double> bandwidths_;
  std::vector<KernelKind> kinds_;
  std::vector<std::size_t> category_counts_;
};

/// Kernel kinds and category counts implied by a design space.
Kde fit_kde(const std::vector<std::vector<double>>& points, const DesignSpace& space);

struct Observation {
  std::vector<double> vector;
  double loss = 0.0;
  std::int64_t config_id = 0;
};

struct GoodBadSplit {
  std::vector<Observation> good;
  std::vector<Observation> bad;
};

/// Minimum number of points in each of the good and bad sets.
constexpr std::size_t min_points_per_kde(std::size_t d) noexcept { return d + 1; }

/// Rank-based split: the max(d+1, ceil(gamma n)) lowest losses are "good".
/// Ties go to the smaller config_id. Throws NotEnoughObservations when
/// n < 2(d+1).
GoodBadSplit split_good_bad(std::vector<Observation> observations, double gamma, std::size_t d);

struct KdeBudgetModel {
  double budget = 0.0;
  Kde good;
  Kde bad;
  std::size_t n_obs = 0;

  bool fitted() const noexcept { return !good.empty() && !bad.empty(); }
};

KdeBudgetModel fit_budget_model(double budget, std::vector<Observation> observations, double gamma,
                                const DesignSpace& space);

/// Draws `n_samples` candidates from the widened good density and returns
/// the one with the largest l(x)/g(x); the first one wins ties. Throws
/// ModelNotFitted.
std::vector<double> propose(const KdeBudgetModel& model, std::mt19937_64& rng, std::size_t n_samples = 64,
                            double bandwidth_factor = 3.0);

/// Largest budget with at least d+3 observations.
std::optional<double> select_model_budget(const std::map<double, std::size_t>& per_budget_counts, std::size_t d);

}  // namespace boah
