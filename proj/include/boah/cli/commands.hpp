#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace boah::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitScenario = 2;
inline constexpr int kExitObjective = 3;

struct RunOptions {
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> output;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  const std::atomic<bool>* stop_flag = nullptr;
};

/// Writes history.jsonl, space.json, scenario.resolved.json and
/// summary.json into the output directory.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct ReportOptions {
  std::filesystem::path history;
  std::filesystem::path space;
  std::filesystem::path out_dir;
  std::vector<double> budgets;
  bool interactions = false;
  std::optional<std::size_t> trees;
  std::optional<std::size_t> max_depth;
  std::optional<std::size_t> min_leaf;
  std::optional<std::uint64_t> seed;
};

/// Analysis only: no objective is constructed or loaded.
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

/// Prints a normalized summary of a space document.
int cmd_validate(const std::filesystem::path& space_path, std::ostream& out, std::ostream& err);

/// SIGINT/SIGTERM set the returned flag instead of terminating.
const std::atomic<bool>* install_interrupt_flag();

}  // namespace boah::cli
