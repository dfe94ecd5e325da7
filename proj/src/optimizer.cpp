#include "boah/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "boah/error.hpp"
#include "boah/logging.hpp"
#include "boah/seeding.hpp"

namespace boah {

void OptimizerConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::ConfigurationError, what); };
  if (eta < 2) throw Error(ErrorKind::IllegalEta, "eta must be an integer >= 2");
  if (!(std::isfinite(b_min) && std::isfinite(b_max) && b_min > 0.0 && b_min <= b_max))
    throw Error(ErrorKind::IllegalBudgets, "need 0 < min_budget <= max_budget");
  if (n_iterations < 1) bad("n_iterations must be >= 1");
  if (!(rho >= 0.0 && rho <= 1.0)) bad("rho must lie in [0, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) bad("gamma must lie in (0, 1)");
  if (n_samples < 1) bad("n_samples must be >= 1");
  if (!(bandwidth_factor > 0.0 && std::isfinite(bandwidth_factor))) bad("bandwidth_factor must be > 0");
  if (n_workers < 1) bad("n_workers must be >= 1");
  if (wall_clock_limit && !(*wall_clock_limit > 0.0)) bad("wall_clock_limit must be > 0");
  if (!budget_set.empty()) {
    auto declared = [&](double x) {
      return std::any_of(budget_set.begin(), budget_set.end(),
                         [&](double b) { return std::abs(b - x) <= 1e-9 * std::max(1.0, std::abs(x)); });
    };
    for (double b : budget_set)
      if (!(std::isfinite(b) && b >= b_min && b <= b_max))
        throw Error(ErrorKind::IllegalBudgets, "declared budgets must lie in [min_budget, max_budget]");
    if (!declared(b_min) || !declared(b_max))
      throw Error(ErrorKind::IllegalBudgets, "declared budgets must include min_budget and max_budget");
  }
}

ConfigGenerator::ConfigGenerator(std::shared_ptr<const DesignSpace> space, const OptimizerConfig& config)
    : space_(std::move(space)),
      rho_(config.rho),
      gamma_(config.gamma),
      n_samples_(config.n_samples),
      bandwidth_factor_(config.bandwidth_factor) {}

void ConfigGenerator::observe(const TrialRecord& record) {
  if (!record.ok()) return;
  data_[record.budget].push_back({space_->to_unit_vector(record.config).vector, *record.loss, record.config_id});
}

std::size_t ConfigGenerator::observations(double budget) const {
  const auto it = data_.find(budget);
  return it == data_.end() ? 0 : it->second.size();
}

Configuration ConfigGenerator::get_config(double /*budget*/, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u >= rho_) {
    const std::size_t d = space_->dimension();
    std::map<double, std::size_t> counts;
    for (const auto& [b, obs] : data_) counts[b] = obs.size();
    const auto selected = select_model_budget(counts, d);
    if (selected && counts[*selected] >= 2 * min_points_per_kde(d)) {
      const auto model = fit_budget_model(*selected, data_.at(*selected), gamma_, *space_);
      const auto vec = propose(model, rng, n_samples_, bandwidth_factor_);
      Configuration c = space_->from_unit_vector(vec);
      if (space_->check_validity(c).empty()) {
        ++model_calls_;
        return c;
      }
    }
  }
  ++random_calls_;
  return space_->sample(rng);
}

namespace {

struct WorkItem {
  JobSpec job;
  Configuration config;
  std::uint64_t seed = 0;
};

class WorkerPool {
 public:
  WorkerPool(const Objective& objective, std::size_t n) : objective_(objective) {
    for (std::size_t i = 0; i < n; ++i) threads_.emplace_back([this, i] { run(i); });
  }
  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      closing_ = true;
    }
    work_cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void submit(WorkItem item) {
    {
      std::lock_guard lock(mutex_);
      work_.push_back(std::move(item));
    }
    work_cv_.notify_one();
  }

  JobResult wait_result() {
    std::unique_lock lock(mutex_);
    result_cv_.wait(lock, [this] { return !results_.empty(); });
    JobResult r = std::move(results_.front());
    results_.pop_front();
    return r;
  }

 private:
  void run(std::size_t worker_id) {
    for (;;) {
      WorkItem item;
      {
        std::unique_lock lock(mutex_);
        work_cv_.wait(lock, [this] { return closing_ || !work_.empty(); });
        if (work_.empty()) return;
        item = std::move(work_.front());
        work_.pop_front();
      }
      JobResult r;
      r.job = item.job;
      r.worker_id = worker_id;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const double loss = objective_(item.config, item.job.budget, item.seed);
        if (std::isfinite(loss)) r.loss = loss;
        else r.error = "objective returned a non-finite loss";
      } catch (const std::exception& e) {
        r.error = e.what();
      } catch (...) {
        r.error = "objective threw a non-standard exception";
      }
      r.duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      {
        std::lock_guard lock(mutex_);
        results_.push_back(std::move(r));
      }
      result_cv_.notify_one();
    }
  }

  const Objective& objective_;
  std::mutex mutex_;
  std::condition_variable work_cv_;
  std::condition_variable result_cv_;
  std::deque<WorkItem> work_;
  std::deque<JobResult> results_;
  bool closing_ = false;
  std::vector<std::thread> threads_;
};

struct InFlight {
  Configuration config;
  double submitted_at = 0.0;
};

}  // namespace

FminResult fmin(const Objective& objective, std::shared_ptr<const DesignSpace> space, const OptimizerConfig& config,
                const FminHooks& hooks) {
  config.validate();
  if (!objective) throw Error(ErrorKind::ConfigurationError, "objective is empty");
  if (!space) throw Error(ErrorKind::ConfigurationError, "design space is missing");

  auto plans = plan_hyperband(config.b_min, config.b_max, config.eta, config.budget_set);
  std::vector<double> declared = planned_budgets(plans);
  declared.insert(declared.end(), config.budget_set.begin(), config.budget_set.end());

  FminResult result{.best_config = {}, .best_loss = {}, .best_config_id = {}, .history = RunHistory(space, declared), .plans = plans, .incomplete_brackets = {}};
  RunHistory& history = result.history;
  HyperbandScheduler scheduler(plans, config.n_iterations, config.eta);
  ConfigGenerator generator(space, config);
  std::mt19937_64 rng(combine_seeds({config.seed, 0x6f7074ULL}));

  std::map<std::int64_t, Configuration> configs;
  std::map<std::pair<std::int64_t, double>, InFlight> in_flight;
  const auto start = std::chrono::steady_clock::now();
  auto wall_now = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  double logical_now = 0.0;
  bool total_failure = false;

  log_info(fmt::format("fmin: {} brackets, eta {}, budgets [{}, {}], {} workers", config.n_iterations, config.eta,
                       config.b_min, config.b_max, config.n_workers));

  if (hooks.on_start) hooks.on_start(history);
  WorkerPool pool(objective, config.n_workers);
  for (;;) {
    while (scheduler.in_flight() < config.n_workers && !scheduler.stopped()) {
      const bool interrupted = hooks.stop_flag && hooks.stop_flag->load();
      const bool out_of_time = config.wall_clock_limit && wall_now() >= *config.wall_clock_limit;
      if (interrupted || out_of_time) {
        scheduler.stop();
        result.stopped_early = true;
        break;
      }
      auto job = scheduler.next_job();
      if (!job) break;
      if (job->kind == JobKind::new_config) configs.emplace(job->config_id, generator.get_config(job->budget, rng));
      const Configuration& c = configs.at(job->config_id);
      const double submitted = config.clock == ClockMode::wall ? wall_now() : logical_now;
      in_flight[{job->config_id, job->budget}] = {c, submitted};
      pool.submit({*job, c, trial_seed(config.seed, job->config_id, job->budget)});
      result.max_in_flight = std::max(result.max_in_flight, scheduler.in_flight());
    }
    if (scheduler.in_flight() == 0) break;

    JobResult r = pool.wait_result();
    const auto key = std::make_pair(r.job.config_id, r.job.budget);
    InFlight f = std::move(in_flight.at(key));
    in_flight.erase(key);

    TrialRecord rec;
    rec.config_id = r.job.config_id;
    rec.bracket_id = r.job.bracket_id;
    rec.budget = r.job.budget;
    rec.config = std::move(f.config);
    rec.loss = r.loss;
    rec.status = r.loss ? TrialStatus::ok : TrialStatus::failed;
    rec.submitted_at = f.submitted_at;
    rec.seed = trial_seed(config.seed, r.job.config_id, r.job.budget);
    if (config.clock == ClockMode::wall) {
      rec.finished_at = std::max(wall_now(), f.submitted_at);
      rec.duration = r.duration;
    } else {
      rec.duration = r.job.budget;
      rec.finished_at = std::max(logical_now, f.submitted_at + r.job.budget);
      logical_now = rec.finished_at;
    }
    if (!r.loss) log_info(fmt::format("trial {}@{} failed: {}", rec.config_id, rec.budget, r.error));
    else log_debug(fmt::format("trial {}@{} loss {}", rec.config_id, rec.budget, *r.loss));

    history.append(rec);
    generator.observe(history.records().back());
    if (hooks.on_record) hooks.on_record(history, history.records().back());
    if (scheduler.report(r.job, r.loss)) {
      total_failure = true;
      scheduler.stop();
    }
  }

  if (total_failure) throw Error(ErrorKind::ObjectiveError, "every trial of a rung failed");

  result.incomplete_brackets = scheduler.incomplete_brackets();
  result.brackets_completed = scheduler.brackets_completed();
  result.model_calls = generator.model_calls();
  result.random_calls = generator.random_calls();

  const double top = history.max_budget();
  for (const auto& rec : history.records()) {
    if (!rec.ok() || rec.budget != top) continue;
    if (!result.best_loss || *rec.loss < *result.best_loss) {
      result.best_loss = rec.loss;
      result.best_config = rec.config;
      result.best_config_id = rec.config_id;
    }
  }
  return result;
}

}  // namespace boah
