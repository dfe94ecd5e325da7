#pragma once

#include <optional>
#include <span>
#include <vector>

#include "boah/run_history.hpp"

namespace boah::analysis {

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman's rho as the Pearson correlation of average ranks. Empty when
/// fewer than 3 pairs or either rank vector is constant.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

/// Pairs configurations evaluated successfully on both budgets (repeated
/// evaluations of one config_id are averaged) and correlates their losses.
std::optional<double> spearman_rank_correlation(const RunHistory& history, double budget_a, double budget_b);

}  // namespace boah::analysis
