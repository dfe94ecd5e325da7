#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boah/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"boah: multi-fidelity hyperparameter optimization and post-hoc analysis"};
  app.require_subcommand(1);

  boah::cli::RunOptions run;
  std::string output;
  std::size_t workers = 0;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run an optimization scenario");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file")->required();
  auto* output_opt = run_cmd->add_option("--output", output, "Output directory (overrides the scenario)");
  auto* workers_opt = run_cmd->add_option("--workers", workers, "Number of parallel workers")->check(CLI::PositiveNumber);
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Run seed");

  boah::cli::ReportOptions report;
  std::size_t trees = 0, max_depth = 0, min_leaf = 0;
  std::uint64_t report_seed = 0;
  auto* report_cmd = app.add_subcommand("report", "Analyse a run history");
  report_cmd->add_option("--history", report.history, "history.jsonl")->required();
  report_cmd->add_option("--space", report.space, "Design-space JSON")->required();
  report_cmd->add_option("--out", report.out_dir, "Report directory")->required();
  report_cmd->add_option("--budgets", report.budgets, "Budgets to compute importance for")->delimiter(',');
  report_cmd->add_flag("--interactions", report.interactions, "Also report pairwise fANOVA interactions");
  auto* trees_opt = report_cmd->add_option("--trees", trees, "Forest size (default 32)");
  auto* depth_opt = report_cmd->add_option("--max-depth", max_depth, "Tree depth limit (default 64)");
  auto* leaf_opt = report_cmd->add_option("--min-leaf", min_leaf, "Minimum records per leaf (default 3)");
  auto* rseed_opt = report_cmd->add_option("--seed", report_seed, "Analysis seed");

  std::string space_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a design-space JSON file");
  validate_cmd->add_option("space", space_path, "Design-space JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : boah::cli::kExitScenario;
  }

  if (*run_cmd) {
    if (*output_opt) run.output = output;
    if (*workers_opt) run.workers = workers;
    if (*seed_opt) run.seed = seed;
    run.stop_flag = boah::cli::install_interrupt_flag();
    return boah::cli::cmd_run(run, std::cout, std::cerr);
  }
  if (*report_cmd) {
    if (*trees_opt) report.trees = trees;
    if (*depth_opt) report.max_depth = max_depth;
    if (*leaf_opt) report.min_leaf = min_leaf;
    if (*rseed_opt) report.seed = report_seed;
    return boah::cli::cmd_report(report, std::cout, std::cerr);
  }
  return boah::cli::cmd_validate(space_path, std::cout, std::cerr);
}
