#include "boah/analysis/rank_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "boah/error.hpp"

namespace boah::analysis {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "paired samples differ in length");
  const std::size_t n = a.size();
  if (n < 3) return std::nullopt;
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  // Mean rank is (n+1)/2 regardless of ties.
  const double mean = 0.5 * static_cast<double>(n + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> spearman_rank_correlation(const RunHistory& history, double budget_a, double budget_b) {
  auto mean_losses = [&](double budget) {
    std::map<std::int64_t, std::pair<double, std::size_t>> acc;
    for (const auto& r : history.records_at_budget(budget)) {
      auto& [sum, count] = acc[r.config_id];
      sum += *r.loss;
      ++count;
    }
    return acc;
  };
  const auto a = mean_losses(budget_a);
  const auto b = mean_losses(budget_b);
  std::vector<double> xa, xb;
  for (const auto& [id, sa] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    xa.push_back(sa.first / static_cast<double>(sa.second));
    xb.push_back(it->second.first / static_cast<double>(it->second.second));
  }
  return spearman(xa, xb);
}

}  // namespace boah::analysis
