#include "boah/cli/commands.hpp"

#include <csignal>
#include <functional>
#include <set>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "boah/analysis/report.hpp"
#include "boah/cli/scenario.hpp"
#include "boah/error.hpp"
#include "boah/logging.hpp"
#include "boah/run_history.hpp"
#include "boah/space_json.hpp"

namespace boah::cli {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

const std::atomic<bool>* install_interrupt_flag() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  return &g_interrupted;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  configure_logging_from_env();
  Scenario scenario;
  try {
    scenario = load_scenario(options.scenario);
    if (options.output) scenario.output_dir = std::filesystem::absolute(*options.output);
    if (options.workers) {
      if (*options.workers < 1) throw Error(ErrorKind::ScenarioError, "workers: must be >= 1");
      scenario.optimizer.n_workers = *options.workers;
    }
    if (options.seed) scenario.optimizer.seed = *options.seed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitScenario;
  }

  const auto& dir = scenario.output_dir;
  std::unique_ptr<JsonlHistoryWriter> writer;
  try {
    prepare_dir(dir);
    write_text(dir / "space.json", space_to_json(*scenario.space).dump(2) + "\n");
    write_text(dir / "scenario.resolved.json", scenario_to_json(scenario).dump(2) + "\n");
    const auto objective = make_objective(scenario);

    FminHooks hooks;
    hooks.stop_flag = options.stop_flag;
    hooks.on_start = [&](const RunHistory& h) {
      writer = std::make_unique<JsonlHistoryWriter>((dir / "history.jsonl").string(), h);
    };
    hooks.on_record = [&](const RunHistory&, const TrialRecord& r) { writer->write(r); };

    FminResult result = [&] {
      try {
        return fmin(objective, scenario.space, scenario.optimizer, hooks);
      } catch (...) {
        writer.reset();
        throw;
      }
    }();
    writer.reset();

    double total_budget = 0.0;
    for (const auto& r : result.history.records()) total_budget += r.budget;
    ordered_json summary;
    summary["best_config_id"] = result.best_config_id ? ordered_json(*result.best_config_id) : ordered_json();
    summary["best_config"] =
        result.best_config ? config_values_to_json(*scenario.space, *result.best_config) : ordered_json();
    summary["best_loss"] = result.best_loss ? ordered_json(*result.best_loss) : ordered_json();
    summary["n_records"] = result.history.size();
    summary["n_failed"] = result.history.failed_count();
    summary["n_configurations"] = [&] {
      std::set<std::int64_t> ids;
      for (const auto& r : result.history.records()) ids.insert(r.config_id);
      return ids.size();
    }();
    summary["total_budget"] = total_budget;
    summary["brackets_completed"] = result.brackets_completed;
    summary["incomplete_brackets"] = result.incomplete_brackets;
    summary["model_calls"] = result.model_calls;
    summary["random_calls"] = result.random_calls;
    summary["stopped_early"] = result.stopped_early;
    summary["space_digest"] = result.history.space_digest();
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    out << "best loss: " << (result.best_loss ? fmt::format("{:.17g}", *result.best_loss) : "none") << "\n";
    out << "records: " << result.history.size() << " (" << result.history.failed_count() << " failed)\n";
    out << "output: " << dir.string() << "\n";
    if (result.stopped_early) err << "warning: run stopped early; bracket(s) left incomplete\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ObjectiveError ? kExitObjective : kExitScenario;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  configure_logging_from_env();
  try {
    auto space = std::make_shared<const DesignSpace>(load_space_file(options.space));
    std::ifstream in(options.history);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + options.history.string());
    const RunHistory history = deserialize(in, space);

    analysis::ReportParams params;
    params.interactions = options.interactions;
    params.importance_budgets = options.budgets;
    if (options.trees) params.forest.n_trees = *options.trees;
    if (options.max_depth) params.forest.max_depth = *options.max_depth;
    if (options.min_leaf) params.forest.min_leaf = *options.min_leaf;
    if (options.seed) {
      params.forest.seed = *options.seed;
      params.mds.seed = *options.seed;
    }
    if (params.forest.n_trees < 2) throw Error(ErrorKind::ConfigurationError, "trees: must be >= 2");
    if (params.forest.min_leaf < 1) throw Error(ErrorKind::ConfigurationError, "min-leaf: must be >= 1");
    const auto report = analysis::build_report(history, params);
    analysis::write_report(report, *space, options.out_dir);
    out << "report written to " << options.out_dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitScenario;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_validate(const std::filesystem::path& space_path, std::ostream& out, std::ostream& err) {
  try {
    const auto space = load_space_file(space_path);
    out << "valid design space: d = " << space.dimension() << "\n";
    for (const auto& hp : space.hyperparameters()) {
      out << "  " << hp.name << ": " << to_string(hp.kind);
      if (hp.is_numeric()) out << fmt::format(" [{}, {}]{}", hp.lower, hp.upper, hp.log_scale ? " log" : "");
      else out << " {" << fmt::format("{}", fmt::join(hp.choices, ", ")) << "}";
      out << "\n";
    }
    out << "conditions: " << space.conditions().size() << "\n";
    std::function<void(std::size_t, int)> tree = [&](std::size_t i, int depth) {
      out << std::string(2 * static_cast<std::size_t>(depth), ' ') << "- " << space.hyperparameter(i).name << "\n";
      for (std::size_t j = 0; j < space.dimension(); ++j)
        if (space.parent_of(j) == i) tree(j, depth + 1);
    };
    if (!space.conditions().empty()) {
      out << "condition forest:\n";
      for (std::size_t i : space.topological_order())
        if (!space.parent_of(i)) {
          bool has_child = false;
          for (std::size_t j = 0; j < space.dimension(); ++j) has_child = has_child || space.parent_of(j) == i;
          if (has_child) tree(i, 1);
        }
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitScenario;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace boah::cli
