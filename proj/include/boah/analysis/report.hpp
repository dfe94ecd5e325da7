#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "boah/analysis/forest.hpp"
#include "boah/analysis/importance.hpp"
#include "boah/analysis/mds.hpp"
#include "boah/run_history.hpp"
#include "json.hpp"

namespace boah::analysis {

struct ReportParams {
  ForestParams forest;
  MdsParams mds;
  bool interactions = false;
  /// Restricts the importance blocks; empty = every declared budget.
  std::vector<double> importance_budgets;
};

struct BudgetImportance {
  double budget = 0.0;
  std::size_t n_obs = 0;
  std::optional<std::string> note;  // set when the block was skipped or is degenerate
  std::vector<FanovaResult> fanova;  // one per hyperparameter when computed
  std::vector<FanovaResult> fanova_pairs;
  std::vector<double> lpi;
  std::optional<std::int64_t> lpi_reference;  // config_id LPI was centred on
};

struct FootprintPoint {
  std::int64_t config_id = 0;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> loss;  // empty when every evaluation failed
  double budget = 0.0;
  bool incumbent = false;
};

struct Footprint {
  std::vector<FootprintPoint> points;
  std::optional<double> stress;
  bool degenerate = false;
  std::optional<std::string> note;
};

struct AnalysisReport {
  std::vector<double> budgets;
  std::size_t n_records = 0;
  std::size_t n_failed = 0;
  std::vector<BudgetImportance> importance;
  std::vector<std::vector<std::optional<double>>> rank_correlation;  // budgets x budgets
  Footprint footprint;
  std::vector<IncumbentPoint> trajectory;
  std::optional<std::string> trajectory_note;
  std::optional<std::int64_t> incumbent_id;
  std::optional<double> incumbent_loss;
};

/// Pure function of the history; never evaluates an objective. Throws
/// EmptyHistory or UnknownBudget.
AnalysisReport build_report(const RunHistory& history, const ReportParams& params = {});

nlohmann::ordered_json report_to_json(const AnalysisReport& report, const DesignSpace& space);
std::string report_markdown(const AnalysisReport& report, const DesignSpace& space);

/// report.json, trajectory.csv, importance_<budget>.csv, rank_correlation.csv,
/// footprint.csv and report.md. Throws IoError.
void write_report(const AnalysisReport& report, const DesignSpace& space, const std::filesystem::path& out_dir);

/// Shortest text that round-trips `budget`, used in file names and headers.
std::string budget_label(double budget);

/// One RFC 4180 field; quoted only when needed.
std::string csv_field(std::string_view text);

}  // namespace boah::analysis
