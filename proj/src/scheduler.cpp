#include "boah/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boah/error.hpp"

namespace boah {

double BracketPlan::total_budget() const {
  double total = 0.0;
  for (std::size_t i = 0; i < budgets.size(); ++i) total += static_cast<double>(survivors[i]) * budgets[i];
  return total;
}

std::vector<BracketPlan> plan_hyperband(double b_min, double b_max, int eta, std::span<const double> budget_set) {
  if (!(std::isfinite(b_min) && std::isfinite(b_max) && b_min > 0.0 && b_min <= b_max))
    throw Error(ErrorKind::IllegalBudgets, "need 0 < min_budget <= max_budget");
  if (eta < 2) throw Error(ErrorKind::IllegalEta, "eta must be an integer >= 2");
  const int s_max = static_cast<int>(std::floor(std::log(b_max / b_min) / std::log(static_cast<double>(eta)) + 1e-9));

  auto snap = [&](double b) {
    if (budget_set.empty()) return b;
    return *std::min_element(budget_set.begin(), budget_set.end(),
                             [&](double x, double y) { return std::abs(x - b) < std::abs(y - b); });
  };

  std::vector<BracketPlan> plans;
  for (int s = s_max; s >= 0; --s) {
    BracketPlan p;
    p.s = s;
    std::size_t eta_s = 1;
    for (int i = 0; i < s; ++i) eta_s *= static_cast<std::size_t>(eta);
    const auto k = static_cast<std::size_t>(s_max + 1);
    const auto m = static_cast<std::size_t>(s + 1);
    p.n0 = (k * eta_s + m - 1) / m;
    std::size_t survivors = p.n0;
    for (int i = 0; i <= s; ++i) {
      p.budgets.push_back(snap(b_max / std::pow(static_cast<double>(eta), s - i)));
      p.survivors.push_back(survivors);
      survivors /= static_cast<std::size_t>(eta);
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

std::vector<double> planned_budgets(const std::vector<BracketPlan>& plans) {
  std::vector<double> out;
  for (const auto& p : plans) out.insert(out.end(), p.budgets.begin(), p.budgets.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::int64_t> successive_halving_promote(std::span<const RungEntry> rung, int eta, bool final_rung) {
  if (eta < 2) throw Error(ErrorKind::IllegalEta, "eta must be >= 2");
  for (const auto& e : rung)
    if (!e.loss) throw Error(ErrorKind::IncompleteRung, "config " + std::to_string(e.config_id) + " still pending");
  const std::size_t k = rung.size() / static_cast<std::size_t>(eta);
  if (k == 0 && !final_rung)
    throw Error(ErrorKind::IncompleteRung, "no configuration would advance from a non-final rung");
  std::vector<RungEntry> sorted(rung.begin(), rung.end());
  std::sort(sorted.begin(), sorted.end(), [](const RungEntry& a, const RungEntry& b) {
    if (*a.loss != *b.loss) return *a.loss < *b.loss;
    return a.config_id < b.config_id;
  });
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < k && i < sorted.size(); ++i) {
    if (std::isinf(*sorted[i].loss) && *sorted[i].loss > 0) break;
    out.push_back(sorted[i].config_id);
  }
  return out;
}

HyperbandScheduler::HyperbandScheduler(std::vector<BracketPlan> plans, std::size_t n_brackets, int eta)
    : plans_(std::move(plans)), n_brackets_(n_brackets), eta_(eta) {
  if (plans_.empty()) throw Error(ErrorKind::ConfigurationError, "no bracket plans");
  if (eta_ < 2) throw Error(ErrorKind::IllegalEta, "eta must be >= 2");
}

const BracketPlan& HyperbandScheduler::plan_of(std::int64_t bracket_id) const {
  return plans_[static_cast<std::size_t>(bracket_id) % plans_.size()];
}

void HyperbandScheduler::open_bracket() {
  const auto id = static_cast<std::int64_t>(brackets_started_++);
  const auto& plan = plan_of(id);
  open_id_ = id;
  current_rung_ = 0;
  rungs_.clear();
  for (std::size_t r = 0; r < plan.budgets.size(); ++r) {
    RungState rs;
    rs.bracket_id = id;
    rs.rung = r;
    rs.budget = plan.budgets[r];
    rs.capacity = r == 0 ? plan.n0 : 0;
    rungs_.push_back(std::move(rs));
  }
}

std::optional<JobSpec> HyperbandScheduler::next_job() {
  if (stopped_) return std::nullopt;
  if (!open_id_) {
    if (brackets_started_ >= n_brackets_) return std::nullopt;
    open_bracket();
  }
  auto& rung = rungs_[current_rung_];
  if (rung.dispatched >= rung.capacity) return std::nullopt;
  JobSpec job;
  job.bracket_id = *open_id_;
  job.rung = current_rung_;
  job.budget = rung.budget;
  if (current_rung_ == 0) {
    job.kind = JobKind::new_config;
    job.config_id = next_config_id_++;
    rung.entries.push_back({job.config_id, std::nullopt});
  } else {
    job.kind = JobKind::promotion;
    job.config_id = rung.entries[rung.dispatched].config_id;
  }
  ++rung.dispatched;
  ++in_flight_;
  return job;
}

bool HyperbandScheduler::report(const JobSpec& job, std::optional<double> loss) {
  if (!open_id_ || job.bracket_id != *open_id_ || job.rung != current_rung_)
    throw Error(ErrorKind::ConfigurationError, "result for a job that is not in flight");
  auto& rung = rungs_[current_rung_];
  auto it = std::find_if(rung.entries.begin(), rung.entries.end(), [&](const RungEntry& e) {
    return e.config_id == job.config_id && !e.loss;
  });
  if (it == rung.entries.end()) throw Error(ErrorKind::ConfigurationError, "unknown or duplicate result");
  it->loss = loss.value_or(std::numeric_limits<double>::infinity());
  ++rung.completed;
  --in_flight_;
  if (!rung.complete()) return false;

  const bool all_failed = std::all_of(rung.entries.begin(), rung.entries.end(),
                                      [](const RungEntry& e) { return std::isinf(*e.loss); });
  const bool last = current_rung_ + 1 == rungs_.size();
  rung.promoted = true;
  if (last || all_failed) {
    ++brackets_completed_;
    open_id_.reset();
    if (all_failed && !last) stopped_ = true;
    return all_failed;
  }
  auto promoted = successive_halving_promote(rung.entries, eta_, true);
  if (promoted.empty()) {
    ++brackets_completed_;
    open_id_.reset();
    return false;
  }
  auto& next = rungs_[current_rung_ + 1];
  for (auto id : promoted) next.entries.push_back({id, std::nullopt});
  next.capacity = promoted.size();
  ++current_rung_;
  return false;
}

bool HyperbandScheduler::finished() const noexcept {
  if (in_flight_ > 0) return false;
  return stopped_ || (!open_id_ && brackets_started_ >= n_brackets_);
}

std::vector<std::int64_t> HyperbandScheduler::incomplete_brackets() const {
  if (open_id_) return {*open_id_};
  return {};
}

}  // namespace boah
