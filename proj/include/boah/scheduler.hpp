#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace boah {

/// One HyperBand bracket: n0 configurations start at budgets.front() and
/// the best 1/eta advance to each following rung.
struct BracketPlan {
  int s = 0;
  std::size_t n0 = 0;
  std::vector<double> budgets;
  std::vector<std::size_t> survivors;

  double total_budget() const;
  friend bool operator==(const BracketPlan&, const BracketPlan&) = default;
};

/// Brackets s = s_max..0 with s_max = floor(log_eta(b_max / b_min)). When
/// `budget_set` is given, planned budgets snap to its nearest member.
/// Throws IllegalBudgets or IllegalEta.
std::vector<BracketPlan> plan_hyperband(double b_min, double b_max, int eta,
                                        std::span<const double> budget_set = {});

/// Union of all rung budgets, ascending.
std::vector<double> planned_budgets(const std::vector<BracketPlan>& plans);

struct RungEntry {
  std::int64_t config_id = 0;
  std::optional<double> loss;  // empty = still pending; failures are +inf
};

/// The floor(n/eta) best config_ids in rank order (loss, then config_id).
/// Failed (+inf) entries are never promoted. Throws IncompleteRung if an
/// entry is pending, or if nobody would advance from a non-final rung.
std::vector<std::int64_t> successive_halving_promote(std::span<const RungEntry> rung, int eta,
                                                     bool final_rung = true);

enum class JobKind { new_config, promotion };

struct JobSpec {
  JobKind kind = JobKind::new_config;
  std::int64_t bracket_id = 0;
  std::size_t rung = 0;
  double budget = 0.0;
  std::int64_t config_id = 0;  // fresh id for new_config, promoted id otherwise

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct RungState {
  std::int64_t bracket_id = 0;
  std::size_t rung = 0;
  double budget = 0.0;
  std::size_t capacity = 0;
  std::vector<RungEntry> entries;  // filled as slots are dispatched (rung 0) or at promotion
  std::size_t dispatched = 0;
  std::size_t completed = 0;
  bool promoted = false;

  bool complete() const noexcept { return completed == capacity; }
};

/// Runs brackets one after another, cycling s_max..0. Slots inside a rung
/// may run concurrently; a rung promotes exactly once, when its last result
/// arrives. Only the optimizer event loop may touch it.
class HyperbandScheduler {
 public:
  HyperbandScheduler(std::vector<BracketPlan> plans, std::size_t n_brackets, int eta);

  /// Lowest-indexed actionable slot of the open bracket; empty when every
  /// remaining slot waits on in-flight results (or the run is over).
  std::optional<JobSpec> next_job();

  /// `loss` empty = FAILED. Returns true when this result completed a rung
  /// in which every trial failed.
  bool report(const JobSpec& job, std::optional<double> loss);

  /// No further jobs are handed out; the open bracket is truncated.
  void stop() noexcept { stopped_ = true; }
  bool stopped() const noexcept { return stopped_; }
  bool finished() const noexcept;
  std::size_t in_flight() const noexcept { return in_flight_; }

  std::size_t brackets_started() const noexcept { return brackets_started_; }
  std::size_t brackets_completed() const noexcept { return brackets_completed_; }
  /// Brackets truncated by stop().
  std::vector<std::int64_t> incomplete_brackets() const;

  const BracketPlan& plan_of(std::int64_t bracket_id) const;
  /// Rungs of the open bracket (empty between brackets).
  const std::vector<RungState>& open_rungs() const noexcept { return rungs_; }

 private:
  void open_bracket();

  std::vector<BracketPlan> plans_;
  std::size_t n_brackets_;
  int eta_;
  std::size_t brackets_started_ = 0;
  std::size_t brackets_completed_ = 0;
  std::optional<std::int64_t> open_id_;
  std::size_t current_rung_ = 0;
  std::vector<RungState> rungs_;
  std::int64_t next_config_id_ = 0;
  std::size_t in_flight_ = 0;
  bool stopped_ = false;
};

}  // namespace boah
