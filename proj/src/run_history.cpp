#include "boah/run_history.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "boah/error.hpp"
#include "boah/space_json.hpp"

namespace boah {

namespace {

using json = nlohmann::json;

bool budgets_equal(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

RunHistory::RunHistory(std::shared_ptr<const DesignSpace> space, std::vector<double> budgets)
    : space_(std::move(space)), budgets_(std::move(budgets)) {
  if (!space_) throw Error(ErrorKind::InvalidRecord, "history without a design space");
  std::sort(budgets_.begin(), budgets_.end());
  budgets_.erase(std::unique(budgets_.begin(), budgets_.end(), budgets_equal), budgets_.end());
  if (budgets_.empty() || !(budgets_.front() > 0.0) || !std::isfinite(budgets_.back()))
    throw Error(ErrorKind::IllegalBudgets, "budget set must be non-empty, positive and finite");
  digest_ = boah::space_digest(*space_);
}

std::optional<double> RunHistory::find_budget(double budget) const {
  for (double b : budgets_)
    if (budgets_equal(b, budget)) return b;
  return std::nullopt;
}

void RunHistory::append(TrialRecord record) {
  auto b = find_budget(record.budget);
  if (!b) throw Error(ErrorKind::UnknownBudget, "budget " + std::to_string(record.budget) + " not declared");
  record.budget = *b;
  auto violations = space_->check_validity(record.config);
  if (!violations.empty())
    throw Error(ErrorKind::InvalidConfiguration, violations.front().hyperparameter + ": " + violations.front().detail);
  if (record.ok() != record.loss.has_value())
    throw Error(ErrorKind::InvalidRecord, "loss must be present iff status is ok");
  if (record.loss && !std::isfinite(*record.loss)) throw Error(ErrorKind::InvalidRecord, "loss must be finite");
  if (record.finished_at < record.submitted_at) throw Error(ErrorKind::InvalidRecord, "finished before submitted");
  records_.push_back(std::move(record));
}

std::vector<TrialRecord> RunHistory::records_at_budget(double budget) const {
  auto b = find_budget(budget);
  if (!b) throw Error(ErrorKind::UnknownBudget, "budget " + std::to_string(budget) + " not declared");
  std::vector<TrialRecord> out;
  for (const auto& r : records_)
    if (r.ok() && r.budget == *b) out.push_back(r);
  return out;
}

std::vector<IncumbentPoint> RunHistory::incumbent_trajectory() const {
  std::vector<IncumbentPoint> out;
  const double top = max_budget();
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!r.ok() || r.budget != top) continue;
    if (out.empty() || *r.loss < out.back().best_loss)
      out.push_back({r.finished_at, i + 1, *r.loss, r.config_id});
  }
  if (out.empty()) throw Error(ErrorKind::NoMaxBudgetRecord, "no successful evaluation at the highest budget");
  return out;
}

std::size_t RunHistory::failed_count() const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const auto& r) { return !r.ok(); }));
}

std::string header_to_jsonl(const RunHistory& history) {
  ordered_json h;
  h["version"] = 1;
  h["space_digest"] = history.space_digest();
  h["budgets"] = history.budgets();
  return h.dump();
}

std::string record_to_jsonl(const DesignSpace& space, const TrialRecord& r) {
  ordered_json j;
  j["config_id"] = r.config_id;
  j["bracket"] = r.bracket_id;
  j["budget"] = r.budget;
  j["config"] = config_values_to_json(space, r.config);
  j["active"] = config_active_to_json(space, r.config);
  if (r.loss) {
    j["loss"] = *r.loss;
  } else {
    j["loss"] = nullptr;
  }
  j["status"] = r.ok() ? "ok" : "failed";
  j["duration"] = r.duration;
  j["submitted"] = r.submitted_at;
  j["finished"] = r.finished_at;
  j["seed"] = r.seed;
  return j.dump();
}

void serialize(const RunHistory& history, std::ostream& out) {
  out << header_to_jsonl(history) << '\n';
  for (const auto& r : history.records()) out << record_to_jsonl(history.space(), r) << '\n';
}

namespace {

[[noreturn]] void schema(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::SchemaViolation, "line " + std::to_string(line) + ": " + what);
}

const json& field(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) schema(line, std::string("missing '") + key + "'");
  return obj[key];
}

double number(const json& obj, const char* key, std::size_t line) {
  const auto& v = field(obj, key, line);
  if (!v.is_number()) schema(line, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

TrialRecord parse_record(const json& j, const DesignSpace& space, std::size_t line) {
  if (!j.is_object()) schema(line, "expected an object");
  static const char* keys[] = {"config_id", "bracket",  "budget",    "config",   "active", "loss",
                               "status",    "duration", "submitted", "finished", "seed"};
  for (const auto& [key, _] : j.items())
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* k) { return key == k; }) == std::end(keys))
      schema(line, "unknown key '" + key + "'");
  TrialRecord r;
  const auto& id = field(j, "config_id", line);
  if (!id.is_number_integer()) schema(line, "'config_id' must be an integer");
  r.config_id = id.get<std::int64_t>();
  const auto& br = field(j, "bracket", line);
  if (!br.is_number_integer()) schema(line, "'bracket' must be an integer");
  r.bracket_id = br.get<std::int64_t>();
  r.budget = number(j, "budget", line);
  const auto& status = field(j, "status", line);
  if (status == "ok") {
    r.status = TrialStatus::ok;
  } else if (status == "failed") {
    r.status = TrialStatus::failed;
  } else {
    schema(line, "'status' must be \"ok\" or \"failed\"");
  }
  const auto& loss = field(j, "loss", line);
  if (r.ok()) {
    if (!loss.is_number()) schema(line, "successful record needs a numeric 'loss'");
    r.loss = loss.get<double>();
  } else if (!loss.is_null()) {
    schema(line, "failed record must have a null 'loss'");
  }
  r.duration = number(j, "duration", line);
  r.submitted_at = number(j, "submitted", line);
  r.finished_at = number(j, "finished", line);
  const auto& seed = field(j, "seed", line);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
    schema(line, "'seed' must be a non-negative integer");
  r.seed = seed.get<std::uint64_t>();
  try {
    r.config = config_from_json(space, field(j, "config", line));
  } catch (const Error& e) {
    schema(line, e.what());
  }
  const auto& active = field(j, "active", line);
  if (!active.is_object() || active.size() != space.dimension()) schema(line, "'active' must map every hyperparameter");
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& name = space.hyperparameter(i).name;
    if (!active.contains(name) || !active[name].is_boolean()) schema(line, "'active' lacks " + name);
    if (active[name].get<bool>() != r.config.active(i)) schema(line, "'active' disagrees with 'config' on " + name);
  }
  return r;
}

}  // namespace

RunHistory deserialize(std::istream& in, std::shared_ptr<const DesignSpace> space) {
  std::string text;
  std::size_t line_no = 0;
  std::optional<RunHistory> history;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      schema(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!history) {
      if (!j.is_object() || !j.contains("version") || j["version"] != 1) schema(line_no, "header must carry version 1");
      if (!j.contains("space_digest") || !j["space_digest"].is_string()) schema(line_no, "header lacks space_digest");
      if (!j.contains("budgets") || !j["budgets"].is_array()) schema(line_no, "header lacks budgets");
      std::vector<double> budgets;
      for (const auto& b : j["budgets"]) {
        if (!b.is_number()) schema(line_no, "budgets must be numbers");
        budgets.push_back(b.get<double>());
      }
      try {
        history.emplace(space, budgets);
      } catch (const Error& e) {
        schema(line_no, e.what());
      }
      if (j["space_digest"].get<std::string>() != history->space_digest())
        throw Error(ErrorKind::SpaceDigestMismatch, "history was written for a different design space");
      continue;
    }
    TrialRecord r = parse_record(j, *space, line_no);
    try {
      history->append(std::move(r));
    } catch (const Error& e) {
      schema(line_no, e.what());
    }
  }
  if (!history) schema(line_no + 1, "missing header line");
  return std::move(*history);
}

struct JsonlHistoryWriter::Impl {
  std::ofstream out;
  std::shared_ptr<const DesignSpace> space;
};

JsonlHistoryWriter::JsonlHistoryWriter(const std::string& path, const RunHistory& history)
    : impl_(std::make_unique<Impl>()) {
  impl_->out.open(path, std::ios::out | std::ios::trunc);
  if (!impl_->out) throw Error(ErrorKind::IoError, "cannot write " + path);
  impl_->space = history.space_ptr();
  impl_->out << header_to_jsonl(history) << '\n';
  for (const auto& r : history.records()) impl_->out << record_to_jsonl(*impl_->space, r) << '\n';
  impl_->out.flush();
}

JsonlHistoryWriter::~JsonlHistoryWriter() = default;

void JsonlHistoryWriter::write(const TrialRecord& record) {
  impl_->out << record_to_jsonl(*impl_->space, record) << '\n';
  impl_->out.flush();
}

}  // namespace boah
