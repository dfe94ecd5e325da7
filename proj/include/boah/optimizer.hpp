#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "boah/design_space.hpp"
#include "boah/kde.hpp"
#include "boah/objective.hpp"
#include "boah/run_history.hpp"
#include "boah/scheduler.hpp"

namespace boah {

/// How trial timestamps are produced. `logical` charges each trial its
/// budget as duration, which keeps single-worker histories byte-identical
/// across runs; `wall` records seconds since the start of the run.
enum class ClockMode { logical, wall };

struct OptimizerConfig {
  int eta = 3;
  double b_min = 1.0;
  double b_max = 9.0;
  std::size_t n_iterations = 1;  // brackets
  double rho = 1.0 / 3.0;
  double gamma = 0.15;
  std::size_t n_samples = 64;
  double bandwidth_factor = 3.0;
  std::size_t n_workers = 1;
  std::uint64_t seed = 0;
  std::optional<double> wall_clock_limit;  // seconds
  ClockMode clock = ClockMode::logical;
  /// Declared budgets; planned budgets snap onto this set when non-empty.
  std::vector<double> budget_set;

  /// Throws ConfigurationError (or IllegalBudgets / IllegalEta).
  void validate() const;
};

struct JobResult {
  JobSpec job;
  std::optional<double> loss;  // empty = FAILED
  double duration = 0.0;
  std::size_t worker_id = 0;
  std::string error;
};

/// Chooses configurations for new slots: random with probability rho or
/// when no budget carries enough data, otherwise a proposal of the KDE
/// model on the largest well-observed budget.
class ConfigGenerator {
 public:
  ConfigGenerator(std::shared_ptr<const DesignSpace> space, const OptimizerConfig& config);

  /// Successful records feed the per-budget data; failures are ignored.
  void observe(const TrialRecord& record);

  Configuration get_config(double budget, std::mt19937_64& rng);

  std::size_t model_calls() const noexcept { return model_calls_; }
  std::size_t random_calls() const noexcept { return random_calls_; }
  std::size_t observations(double budget) const;

 private:
  std::shared_ptr<const DesignSpace> space_;
  double rho_;
  double gamma_;
  std::size_t n_samples_;
  double bandwidth_factor_;
  std::map<double, std::vector<Observation>> data_;
  std::size_t model_calls_ = 0;
  std::size_t random_calls_ = 0;
};

struct FminHooks {
  /// Called once with the empty history before the first dispatch.
  std::function<void(const RunHistory&)> on_start;
  /// Called on the event-loop thread after each record is appended.
  std::function<void(const RunHistory&, const TrialRecord&)> on_record;
  /// Checked before every dispatch; once true no new trials start.
  const std::atomic<bool>* stop_flag = nullptr;
};

struct FminResult {
  std::optional<Configuration> best_config;
  std::optional<double> best_loss;
  std::optional<std::int64_t> best_config_id;
  RunHistory history;
  std::vector<BracketPlan> plans;
  std::vector<std::int64_t> incomplete_brackets;
  std::size_t brackets_completed = 0;
  std::size_t model_calls = 0;
  std::size_t random_calls = 0;
  std::size_t max_in_flight = 0;
  bool stopped_early = false;
};

/// BOHB: runs `config.n_iterations` HyperBand brackets, filling new slots
/// through ConfigGenerator and evaluating on `config.n_workers` threads.
/// Results are applied in completion order. Throws ConfigurationError for
/// an invalid config, and ObjectiveError (after in-flight trials drain) when
/// every trial of a rung fails.
FminResult fmin(const Objective& objective, std::shared_ptr<const DesignSpace> space, const OptimizerConfig& config,
                const FminHooks& hooks = {});

}  // namespace boah
