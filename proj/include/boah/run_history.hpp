#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boah/design_space.hpp"

namespace boah {

enum class TrialStatus { ok, failed };

struct TrialRecord {
  std::int64_t config_id = 0;
  std::int64_t bracket_id = 0;
  double budget = 0.0;
  Configuration config;
  std::optional<double> loss;  // empty iff status == failed
  TrialStatus status = TrialStatus::ok;
  double duration = 0.0;
  double submitted_at = 0.0;
  double finished_at = 0.0;
  std::uint64_t seed = 0;

  bool ok() const noexcept { return status == TrialStatus::ok; }
  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct IncumbentPoint {
  double finished_at;
  std::size_t evaluation_index;  // 1-based position in the full history
  double best_loss;
  std::int64_t config_id;
};

/// Append-only log of evaluations, in completion order.
class RunHistory {
 public:
  RunHistory(std::shared_ptr<const DesignSpace> space, std::vector<double> budgets);

  const DesignSpace& space() const noexcept { return *space_; }
  std::shared_ptr<const DesignSpace> space_ptr() const noexcept { return space_; }
  const std::vector<double>& budgets() const noexcept { return budgets_; }
  const std::string& space_digest() const noexcept { return digest_; }
  double max_budget() const { return budgets_.back(); }

  const std::vector<TrialRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  /// Throws UnknownBudget, InvalidConfiguration or InvalidRecord.
  void append(TrialRecord record);

  /// Successful records at `budget`, completion order. Throws UnknownBudget.
  std::vector<TrialRecord> records_at_budget(double budget) const;

  /// Running minimum over max-budget records, one point per improvement.
  /// Throws NoMaxBudgetRecord.
  std::vector<IncumbentPoint> incumbent_trajectory() const;

  /// Snaps `budget` to the declared set (relative tolerance 1e-9).
  std::optional<double> find_budget(double budget) const;

  std::size_t failed_count() const;

 private:
  std::shared_ptr<const DesignSpace> space_;
  std::vector<double> budgets_;
  std::string digest_;
  std::vector<TrialRecord> records_;
};

/// JSONL codec. Line 1 is the header {"version":1,"space_digest":..,"budgets":[..]},
/// every further line one record.
std::string header_to_jsonl(const RunHistory& history);
std::string record_to_jsonl(const DesignSpace& space, const TrialRecord& record);
void serialize(const RunHistory& history, std::ostream& out);

/// Throws SchemaViolation (message carries the 1-based line number) or
/// SpaceDigestMismatch.
RunHistory deserialize(std::istream& in, std::shared_ptr<const DesignSpace> space);

/// Streams records to a file as they arrive; each line is flushed so an
/// interrupted run leaves a valid prefix.
class JsonlHistoryWriter {
 public:
  JsonlHistoryWriter(const std::string& path, const RunHistory& history);
  ~JsonlHistoryWriter();
  JsonlHistoryWriter(const JsonlHistoryWriter&) = delete;
  JsonlHistoryWriter& operator=(const JsonlHistoryWriter&) = delete;

  void write(const TrialRecord& record);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace boah
