#include "boah/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "boah/error.hpp"
#include "boah/kernels.hpp"

namespace boah {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))

std::size_t category_of(double u, std::size_t k) {
  return std::min(static_cast<std::size_t>(std::floor(u * static_cast<double>(k))), k - 1);
}

double truncated_gaussian_log_mass(double center, double h) {
  const double s = h * std::numbers::sqrt2;
  return std::log(0.5 * (std::erf((1.0 - center) / s) - std::erf(-center / s)));
}

}  // namespace

Kde Kde::fit(const std::vector<std::vector<double>>& points, std::vector<KernelKind> kinds,
             std::vector<std::size_t> category_counts) {
  if (points.empty()) throw Error(ErrorKind::EmptyPointSet, "cannot fit a KDE without points");
  const std::size_t d = kinds.size();
  if (category_counts.size() != d) throw Error(ErrorKind::DimensionMismatch, "category_counts size differs from d");
  Kde kde;
  kde.n_ = points.size();
  kde.points_.reserve(kde.n_ * d);
  for (const auto& p : points) {
    if (p.size() != d) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from kernel count");
    for (double v : p) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::ComponentOutOfRange, "KDE points must lie in [0,1]");
      kde.points_.push_back(v);
    }
  }
  for (std::size_t j = 0; j < d; ++j)
    if (kinds[j] == KernelKind::aitchison_aitken && category_counts[j] == 0)
      throw Error(ErrorKind::DimensionMismatch, "categorical dimension without categories");

  // Scott's rule on the encoded coordinates.
  const double n = static_cast<double>(kde.n_);
  const double scale = std::pow(n, -1.0 / (static_cast<double>(d) + 4.0));
  kde.bandwidths_.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    double sd = 0.0;
    if (kde.n_ > 1) {
      double mean = 0.0;
      for (std::size_t i = 0; i < kde.n_; ++i) mean += kde.points_[i * d + j];
      mean /= n;
      double ss = 0.0;
      for (std::size_t i = 0; i < kde.n_; ++i) ss += (kde.points_[i * d + j] - mean) * (kde.points_[i * d + j] - mean);
      sd = std::sqrt(ss / (n - 1.0));
    }
    double h = std::max(scale * sd, kMinBandwidth);
    if (kinds[j] == KernelKind::aitchison_aitken) h = std::min(h, 1.0 - kMinBandwidth);
    kde.bandwidths_[j] = h;
  }

  kde.log_norm_.assign(kde.n_ * d, 0.0);
  for (std::size_t i = 0; i < kde.n_; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (kinds[j] == KernelKind::truncated_gaussian)
        kde.log_norm_[i * d + j] = truncated_gaussian_log_mass(kde.points_[i * d + j], kde.bandwidths_[j]);

  kde.kinds_ = std::move(kinds);
  kde.category_counts_ = std::move(category_counts);
  return kde;
}

double Kde::log_density(std::span<const double> x) const {
  const std::size_t d = dimension();
  if (x.size() != d) throw Error(ErrorKind::DimensionMismatch, "query dimension differs from KDE");
  if (n_ == 0) throw Error(ErrorKind::EmptyPointSet, "KDE has no points");
  std::vector<double> terms(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double t = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double p = points_[i * d + j];
      const double h = bandwidths_[j];
      if (kinds_[j] == KernelKind::truncated_gaussian) {
        const double z = (x[j] - p) / h;
        t += -0.5 * z * z - kLogSqrt2Pi - std::log(h) - log_norm_[i * d + j];
      } else {
        const std::size_t k = category_counts_[j];
        if (k < 2) continue;
        t += category_of(x[j], k) == category_of(p, k) ? std::log1p(-h)
                                                         : std::log(h / static_cast<double>(k - 1));
      }
    }
    terms[i] = t;
  }
  const double m = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s) - std::log(static_cast<double>(n_));
}

double Kde::density(std::span<const double> x) const { return std::exp(log_density(x)); }

std::vector<double> Kde::sample(std::mt19937_64& rng, double factor) const {
  const std::size_t d = dimension();
  std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
  const std::size_t i = pick(rng);
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double p = points_[i * d + j];
    if (kinds_[j] == KernelKind::truncated_gaussian) {
      std::normal_distribution<double> normal(p, bandwidths_[j] * factor);
      double v = p;
      for (int attempt = 0; attempt < 100; ++attempt) {
        const double draw = normal(rng);
        if (draw >= 0.0 && draw <= 1.0) {
          v = draw;
          break;
        }
      }
      out[j] = v;
    } else {
      const std::size_t k = category_counts_[j];
      const double keep_prob = 1.0 - std::min(bandwidths_[j] * factor, 1.0);
      std::size_t c = category_of(p, k);
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= keep_prob)
        c = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
      out[j] = (static_cast<double>(c) + 0.5) / static_cast<double>(k);
    }
  }
  return out;
}

Kde fit_kde(const std::vector<std::vector<double>>& points, const DesignSpace& space) {
  std::vector<KernelKind> kinds;
  std::vector<std::size_t> counts;
  for (const auto& hp : space.hyperparameters()) {
    kinds.push_back(hp.is_numeric() ? KernelKind::truncated_gaussian : KernelKind::aitchison_aitken);
    counts.push_back(hp.is_numeric() ? 0 : hp.num_choices());
  }
  return Kde::fit(points, std::move(kinds), std::move(counts));
}

GoodBadSplit split_good_bad(std::vector<Observation> observations, double gamma, std::size_t d) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::ConfigurationError, "gamma must lie in (0,1)");
  const std::size_t n = observations.size();
  const std::size_t n_min = min_points_per_kde(d);
  if (n < 2 * n_min)
    throw Error(ErrorKind::NotEnoughObservations,
                std::to_string(n) + " observations, need " + std::to_string(2 * n_min));
  std::stable_sort(observations.begin(), observations.end(), [](const Observation& a, const Observation& b) {
    if (a.loss != b.loss) return a.loss < b.loss;
    return a.config_id < b.config_id;
  });
  const auto by_quantile = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n) - 1e-9));
  const std::size_t n_good = std::min(std::max(n_min, by_quantile), n - n_min);
  GoodBadSplit split;
  split.good.assign(std::make_move_iterator(observations.begin()),
                    std::make_move_iterator(observations.begin() + static_cast<std::ptrdiff_t>(n_good)));
  split.bad.assign(std::make_move_iterator(observations.begin() + static_cast<std::ptrdiff_t>(n_good)),
                   std::make_move_iterator(observations.end()));
  return split;
}

KdeBudgetModel fit_budget_model(double budget, std::vector<Observation> observations, double gamma,
                                const DesignSpace& space) {
  const std::size_t n = observations.size();
  auto split = split_good_bad(std::move(observations), gamma, space.dimension());
  auto vectors = [](const std::vector<Observation>& obs) {
    std::vector<std::vector<double>> out;
    out.reserve(obs.size());
    for (const auto& o : obs) out.push_back(o.vector);
    return out;
  };
  return {budget, fit_kde(vectors(split.good), space), fit_kde(vectors(split.bad), space), n};
}

std::vector<double> propose(const KdeBudgetModel& model, std::mt19937_64& rng, std::size_t n_samples,
                            double bandwidth_factor) {
  if (!model.fitted()) throw Error(ErrorKind::ModelNotFitted, "budget model has no good/bad densities");
  if (n_samples == 0) n_samples = 1;
  const std::size_t d = model.good.dimension();
  std::vector<double> candidates;
  candidates.reserve(n_samples * d);
  for (std::size_t s = 0; s < n_samples; ++s) {
    auto c = model.good.sample(rng, bandwidth_factor);
    candidates.insert(candidates.end(), c.begin(), c.end());
  }
  std::vector<double> log_l(n_samples), log_g(n_samples);
  kernels::kde_log_density(model.good, candidates, log_l);
  kernels::kde_log_density(model.bad, candidates, log_g);
  std::size_t best = 0;
  double best_score = log_l[0] - log_g[0];
  for (std::size_t s = 1; s < n_samples; ++s) {
    const double score = log_l[s] - log_g[s];
    if (score > best_score) {
      best_score = score;
      best = s;
    }
  }
  return {candidates.begin() + static_cast<std::ptrdiff_t>(best * d),
          candidates.begin() + static_cast<std::ptrdiff_t>((best + 1) * d)};
}

std::optional<double> select_model_budget(const std::map<double, std::size_t>& per_budget_counts, std::size_t d) {
  const std::size_t needed = min_points_per_kde(d) + 2;
  for (auto it = per_budget_counts.rbegin(); it != per_budget_counts.rend(); ++it)
    if (it->second >= needed) return it->first;
  return std::nullopt;
}

}  // namespace boah
