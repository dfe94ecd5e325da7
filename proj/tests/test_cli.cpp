#include <filesystem>
#include <fstream>
#include <sstream>

#include "boah/cli/commands.hpp"
#include "boah/cli/scenario.hpp"
#include "boah/objective.hpp"
#include "support.hpp"

using namespace boah;
using namespace boah::cli;
using nlohmann::json;

namespace {

struct Workspace {
  std::filesystem::path root;
  explicit Workspace(const std::string& name) : root(std::filesystem::temp_directory_path() / ("boah_cli_" + name)) {
    std::filesystem::remove_all(root);
    std::filesystem::create_directories(root);
  }
  ~Workspace() { std::filesystem::remove_all(root); }

  std::filesystem::path write(const std::string& file, const std::string& text) const {
    std::ofstream(root / file, std::ios::binary) << text;
    return root / file;
  }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::filesystem::path& scenario, std::optional<std::filesystem::path> output = {}) {
  std::ostringstream out, err;
  RunOptions o;
  o.scenario = scenario;
  o.output = std::move(output);
  const int code = cmd_run(o, out, err);
  return {code, out.str(), err.str()};
}

Outcome report(const std::filesystem::path& dir, const std::filesystem::path& out_dir, std::vector<double> budgets = {}) {
  std::ostringstream out, err;
  ReportOptions o;
  o.history = dir / "history.jsonl";
  o.space = dir / "space.json";
  o.out_dir = out_dir;
  o.budgets = std::move(budgets);
  const int code = cmd_report(o, out, err);
  return {code, out.str(), err.str()};
}

const char* kSphereScenario = R"({
  "objective": {"builtin": "noisy-sphere-d2"},
  "min_budget": 1, "max_budget": 9, "eta": 3, "iterations": 12, "workers": 1, "seed": 0,
  "output_dir": "out"
})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("seeded sphere run and report") {
    Workspace ws("run");
    const auto r = run(ws.write("scenario.json", kSphereScenario));
    REQUIRE_MESSAGE(r.code == kExitOk, r.err);
    const auto dir = ws.root / "out";
    for (const char* f : {"history.jsonl", "space.json", "scenario.resolved.json", "summary.json"})
      CHECK(std::filesystem::exists(dir / f));
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary["best_loss"].get<double>() <= 0.5);  // default x = (0, 0)
    CHECK(summary["n_records"].get<std::size_t>() > 0);

    const auto before = objective_evaluations();
    const auto rep = report(dir, ws.root / "report");
    REQUIRE_MESSAGE(rep.code == kExitOk, rep.err);
    CHECK(objective_evaluations() == before);
    for (const char* f : {"report.json", "trajectory.csv", "rank_correlation.csv", "footprint.csv", "report.md",
                          "importance_9.csv"})
      CHECK(std::filesystem::exists(ws.root / "report" / f));

    const auto only9 = report(dir, ws.root / "report9", {9});
    CHECK(only9.code == kExitOk);
    CHECK(std::filesystem::exists(ws.root / "report9" / "importance_9.csv"));
    CHECK_FALSE(std::filesystem::exists(ws.root / "report9" / "importance_1.csv"));
  }

  TEST_CASE("runs are byte-reproducible and the resolved scenario replays them") {
    Workspace ws("repro");
    const auto scenario = ws.write("scenario.json", kSphereScenario);
    REQUIRE(run(scenario, ws.root / "a").code == kExitOk);
    REQUIRE(run(scenario, ws.root / "b").code == kExitOk);
    CHECK(slurp(ws.root / "a" / "history.jsonl") == slurp(ws.root / "b" / "history.jsonl"));
    REQUIRE(run(ws.root / "a" / "scenario.resolved.json", ws.root / "c").code == kExitOk);
    CHECK(slurp(ws.root / "a" / "history.jsonl") == slurp(ws.root / "c" / "history.jsonl"));

    const auto s = load_scenario(ws.root / "a" / "scenario.resolved.json");
    CHECK(scenario_to_json(s) == scenario_to_json(parse_scenario(json(scenario_to_json(s)), ws.root)));
  }

  TEST_CASE("scenario errors exit 2 and name the field") {
    Workspace ws("errors");
    auto bad = json::parse(kSphereScenario);
    bad["min_budget"] = 10;
    auto r = run(ws.write("s1.json", bad.dump()));
    CHECK(r.code == kExitScenario);
    CHECK(r.err.find("min_budget") != std::string::npos);

    bad = json::parse(kSphereScenario);
    bad["colour"] = "blue";
    r = run(ws.write("s2.json", bad.dump()));
    CHECK(r.code == kExitScenario);
    CHECK(r.err.find("colour") != std::string::npos);

    bad = json::parse(kSphereScenario);
    bad["objective"] = json{{"builtin", "cartpole"}};
    CHECK(run(ws.write("s3.json", bad.dump())).code == kExitScenario);

    CHECK(run(ws.write("s4.json", "{not json")).code == kExitScenario);
    CHECK(run(ws.root / "missing.json").code == kExitScenario);
  }

  TEST_CASE("a command printing garbage fails every trial") {
    Workspace ws("garbage");
    const json s = {
        {"space", {{"hyperparameters", json::array({{{"name", "x"}, {"type", "continuous"}, {"lower", 0}, {"upper", 1}}})}}},
        {"objective", {{"command", {"sh", "-c", "cat > /dev/null; echo garbage"}}}},
        {"output_dir", "out"}};
    const auto r = run(ws.write("s.json", s.dump()));
    CHECK(r.code == kExitObjective);
    CHECK(std::filesystem::exists(ws.root / "out" / "history.jsonl"));
  }

  TEST_CASE("a well-behaved command objective") {
    Workspace ws("command");
    const json s = {
        {"space", {{"hyperparameters", json::array({{{"name", "x"}, {"type", "continuous"}, {"lower", 0}, {"upper", 1}}})}}},
        {"objective", {{"command", {"sh", "-c", "cat > /dev/null; echo '{\"loss\": 0.25}'"}}, {"timeout", 10}}},
        {"output_dir", "out"}};
    const auto r = run(ws.write("s.json", s.dump()));
    REQUIRE_MESSAGE(r.code == kExitOk, r.err);
    CHECK(json::parse(slurp(ws.root / "out" / "summary.json"))["best_loss"] == 0.25);
  }

  TEST_CASE("report rejects a history from a different space") {
    Workspace ws("mismatch");
    REQUIRE(run(ws.write("scenario.json", kSphereScenario)).code == kExitOk);
    ws.write("out/space.json",
             R"({"hyperparameters":[{"name":"y","type":"continuous","lower":0,"upper":1}]})");
    CHECK(report(ws.root / "out", ws.root / "report").code == kExitScenario);
  }

  TEST_CASE("report on a header-only history") {
    Workspace ws("empty");
    REQUIRE(run(ws.write("scenario.json", kSphereScenario)).code == kExitOk);
    const auto full = slurp(ws.root / "out" / "history.jsonl");
    ws.write("out/history.jsonl", full.substr(0, full.find('\n') + 1));
    const auto r = report(ws.root / "out", ws.root / "report");
    CHECK(r.code == kExitScenario);
    CHECK(r.err.find("EmptyHistory") != std::string::npos);
  }

  TEST_CASE("validate") {
    Workspace ws("validate");
    std::ostringstream out, err;
    const auto good = ws.write("good.json", R"({
      "hyperparameters": [
        {"name": "kernel", "type": "categorical", "choices": ["rbf", "linear"], "default": "rbf"},
        {"name": "gamma", "type": "continuous", "lower": 1e-5, "upper": 10, "log": true}
      ],
      "conditions": [{"child": "gamma", "parent": "kernel", "values": ["rbf"]}]
    })");
    CHECK(cmd_validate(good, out, err) == kExitOk);
    CHECK(out.str().find("conditions: 1") != std::string::npos);

    const auto cycle = ws.write("cycle.json", R"({
      "hyperparameters": [
        {"name": "a", "type": "categorical", "choices": ["x", "y"]},
        {"name": "b", "type": "categorical", "choices": ["x", "y"]}
      ],
      "conditions": [{"child": "a", "parent": "b", "values": ["x"]}, {"child": "b", "parent": "a", "values": ["x"]}]
    })");
    std::ostringstream e1;
    CHECK(cmd_validate(cycle, out, e1) == kExitScenario);
    CHECK(e1.str().find("CycleInConditions") != std::string::npos);

    const auto dup = ws.write("dup.json", R"({
      "hyperparameters": [
        {"name": "a", "type": "continuous", "lower": 0, "upper": 1},
        {"name": "a", "type": "continuous", "lower": 0, "upper": 1}
      ]
    })");
    std::ostringstream e2;
    CHECK(cmd_validate(dup, out, e2) == kExitScenario);
    CHECK(e2.str().find("DuplicateName") != std::string::npos);
  }
}
