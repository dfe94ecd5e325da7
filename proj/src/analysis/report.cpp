#include "boah/analysis/report.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "boah/analysis/gower.hpp"
#include "boah/analysis/rank_correlation.hpp"
#include "boah/error.hpp"
#include "boah/seeding.hpp"
#include "boah/space_json.hpp"

namespace boah::analysis {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

BudgetImportance importance_at(const RunHistory& history, double budget, const ReportParams& params,
                               const std::optional<Configuration>& incumbent,
                               std::optional<std::int64_t> incumbent_id) {
  const auto& space = history.space();
  BudgetImportance block;
  block.budget = budget;
  const auto records = history.records_at_budget(budget);
  block.n_obs = records.size();
  const std::size_t need = min_forest_records(space.dimension());
  if (records.size() < need) {
    block.note = fmt::format("NotEnoughData: {} successful records, {} required", records.size(), need);
    return block;
  }
  ForestParams fp = params.forest;
  fp.seed = combine_seeds({params.forest.seed, std::bit_cast<std::uint64_t>(budget)});
  const auto forest = fit_forest(records, space, fp);
  const auto fan = fanova_all(forest, params.interactions);
  block.fanova = fan.singletons;
  block.fanova_pairs = fan.pairs;
  if (!block.fanova.empty() && block.fanova.front().degenerate) block.note = "constant surrogate: no variance to attribute";

  if (incumbent) {
    block.lpi = lpi_all(forest, space, *incumbent);
    block.lpi_reference = incumbent_id;
  } else {
    const auto best = std::min_element(records.begin(), records.end(),
                                       [](const TrialRecord& a, const TrialRecord& b) { return *a.loss < *b.loss; });
    block.lpi = lpi_all(forest, space, best->config);
    block.lpi_reference = best->config_id;
  }
  return block;
}

Footprint footprint_of(const RunHistory& history, const ReportParams& params, std::optional<std::int64_t> incumbent) {
  struct Pick {
    const TrialRecord* rec = nullptr;
  };
  std::map<std::int64_t, Pick> picks;
  for (const auto& r : history.records()) {
    auto& p = picks[r.config_id];
    if (!p.rec) {
      p.rec = &r;
      continue;
    }
    const bool better = (r.ok() && !p.rec->ok()) || (r.ok() == p.rec->ok() && r.budget > p.rec->budget);
    if (better) p.rec = &r;
  }
  Footprint fp;
  std::vector<Configuration> configs;
  for (const auto& [id, p] : picks) {
    FootprintPoint pt;
    pt.config_id = id;
    pt.loss = p.rec->loss;
    pt.budget = p.rec->budget;
    pt.incumbent = incumbent && *incumbent == id;
    fp.points.push_back(pt);
    configs.push_back(p.rec->config);
  }
  if (configs.size() < 3) {
    fp.note = fmt::format("NotEnoughData: {} distinct configurations, 3 required", configs.size());
    return fp;
  }
  const auto delta = gower_matrix(history.space(), configs);
  const auto emb = mds_embed(delta, configs.size(), params.mds);
  for (std::size_t i = 0; i < fp.points.size(); ++i) {
    fp.points[i].x = emb.coords[i * emb.dims];
    fp.points[i].y = emb.dims > 1 ? emb.coords[i * emb.dims + 1] : 0.0;
  }
  fp.stress = emb.stress;
  fp.degenerate = emb.degenerate;
  if (emb.degenerate) fp.note = "DegenerateMatrix: all configurations coincide";
  return fp;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

std::string pct(double v) { return fmt::format("{:.1f}%", 100.0 * v); }

}  // namespace

std::string budget_label(double budget) { return fmt::format("{}", budget); }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

AnalysisReport build_report(const RunHistory& history, const ReportParams& params) {
  if (history.empty()) throw Error(ErrorKind::EmptyHistory, "history has no records");
  AnalysisReport report;
  report.budgets = history.budgets();
  report.n_records = history.size();
  report.n_failed = history.failed_count();

  std::optional<Configuration> incumbent;
  try {
    report.trajectory = history.incumbent_trajectory();
    report.incumbent_id = report.trajectory.back().config_id;
    report.incumbent_loss = report.trajectory.back().best_loss;
    const auto& recs = history.records();
    incumbent = recs[report.trajectory.back().evaluation_index - 1].config;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoMaxBudgetRecord) throw;
    report.trajectory_note = "NoMaxBudgetRecord: no successful evaluation at the highest budget";
  }

  std::vector<double> wanted;
  if (params.importance_budgets.empty()) {
    wanted = report.budgets;
  } else {
    for (double b : params.importance_budgets) {
      const auto snapped = history.find_budget(b);
      if (!snapped) throw Error(ErrorKind::UnknownBudget, "budget " + budget_label(b) + " is not declared");
      wanted.push_back(*snapped);
    }
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  }
  for (double b : wanted) report.importance.push_back(importance_at(history, b, params, incumbent, report.incumbent_id));

  const std::size_t nb = report.budgets.size();
  report.rank_correlation.assign(nb, std::vector<std::optional<double>>(nb));
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i; j < nb; ++j) {
      const auto rho = spearman_rank_correlation(history, report.budgets[i], report.budgets[j]);
      report.rank_correlation[i][j] = rho;
      report.rank_correlation[j][i] = rho;
    }

  report.footprint = footprint_of(history, params, report.incumbent_id);
  return report;
}

ojson report_to_json(const AnalysisReport& report, const DesignSpace& space) {
  ojson doc;
  doc["budgets"] = report.budgets;
  doc["n_records"] = report.n_records;
  doc["n_failed"] = report.n_failed;
  doc["incumbent"] = report.incumbent_id ? ojson{{"config_id", *report.incumbent_id}, {"loss", *report.incumbent_loss}}
                                         : ojson(nullptr);

  ojson traj = ojson::array();
  for (const auto& p : report.trajectory)
    traj.push_back({{"index", p.evaluation_index}, {"time", p.finished_at}, {"loss", p.best_loss},
                    {"config_id", p.config_id}});
  doc["trajectory"] = {{"points", traj}, {"note", report.trajectory_note ? ojson(*report.trajectory_note) : ojson()}};

  ojson imp = ojson::array();
  for (const auto& b : report.importance) {
    ojson block;
    block["budget"] = b.budget;
    block["n_obs"] = b.n_obs;
    block["note"] = b.note ? ojson(*b.note) : ojson();
    ojson hps = ojson::array();
    for (std::size_t j = 0; j < b.fanova.size(); ++j) {
      ojson h;
      h["hp"] = space.hyperparameter(j).name;
      h["fanova_mean"] = b.fanova[j].fraction_mean;
      h["fanova_std"] = b.fanova[j].fraction_std;
      h["fanova_per_tree"] = b.fanova[j].per_tree;
      h["lpi"] = j < b.lpi.size() ? ojson(b.lpi[j]) : ojson();
      hps.push_back(std::move(h));
    }
    block["hyperparameters"] = std::move(hps);
    if (!b.fanova_pairs.empty()) {
      ojson pairs = ojson::array();
      for (const auto& r : b.fanova_pairs)
        pairs.push_back({{"hps", {space.hyperparameter(r.dims[0]).name, space.hyperparameter(r.dims[1]).name}},
                         {"fanova_mean", r.fraction_mean},
                         {"fanova_std", r.fraction_std}});
      block["interactions"] = std::move(pairs);
    }
    block["lpi_reference"] = b.lpi_reference ? ojson(*b.lpi_reference) : ojson();
    imp.push_back(std::move(block));
  }
  doc["importance"] = std::move(imp);

  ojson corr = ojson::array();
  for (const auto& row : report.rank_correlation) {
    ojson r = ojson::array();
    for (const auto& v : row) r.push_back(opt_json(v));
    corr.push_back(std::move(r));
  }
  doc["rank_correlation"] = {{"budgets", report.budgets}, {"matrix", corr}};

  ojson pts = ojson::array();
  for (const auto& p : report.footprint.points)
    pts.push_back({{"config_id", p.config_id}, {"x", p.x}, {"y", p.y}, {"loss", opt_json(p.loss)},
                   {"budget", p.budget}, {"incumbent", p.incumbent}});
  doc["footprint"] = {{"points", pts},
                      {"stress", opt_json(report.footprint.stress)},
                      {"degenerate", report.footprint.degenerate},
                      {"note", report.footprint.note ? ojson(*report.footprint.note) : ojson()}};
  return doc;
}

std::string report_markdown(const AnalysisReport& report, const DesignSpace& space) {
  std::ostringstream md;
  md << "# Optimization report\n\n";
  md << "- records: " << report.n_records << " (" << report.n_failed << " failed, excluded from analyses)\n";
  md << "- budgets:";
  for (double b : report.budgets) md << ' ' << budget_label(b);
  md << "\n";
  if (report.incumbent_id)
    md << "- incumbent: config " << *report.incumbent_id << ", loss " << num(*report.incumbent_loss) << "\n";
  else
    md << "- incumbent: none (" << report.trajectory_note.value_or("") << ")\n";

  md << "\n## Incumbent trajectory\n\n";
  if (report.trajectory.empty()) md << report.trajectory_note.value_or("") << "\n";
  else {
    md << "| evaluation | time | loss |\n|---:|---:|---:|\n";
    for (const auto& p : report.trajectory)
      md << "| " << p.evaluation_index << " | " << fmt::format("{:.6g}", p.finished_at) << " | "
         << fmt::format("{:.6g}", p.best_loss) << " |\n";
  }

  for (const auto& b : report.importance) {
    md << "\n## Importance at budget " << budget_label(b.budget) << " (" << b.n_obs << " observations)\n\n";
    if (b.note) md << b.note.value() << "\n\n";
    if (b.fanova.empty()) continue;
    md << "| hyperparameter | fANOVA | std | LPI |\n|---|---:|---:|---:|\n";
    for (std::size_t j = 0; j < b.fanova.size(); ++j)
      md << "| " << space.hyperparameter(j).name << " | " << pct(b.fanova[j].fraction_mean) << " | "
         << pct(b.fanova[j].fraction_std) << " | " << (j < b.lpi.size() ? pct(b.lpi[j]) : "") << " |\n";
  }

  md << "\n## Rank correlation across budgets\n\n|  |";
  for (double b : report.budgets) md << ' ' << budget_label(b) << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < report.budgets.size(); ++i) md << "---:|";
  md << "\n";
  for (std::size_t i = 0; i < report.budgets.size(); ++i) {
    md << "| " << budget_label(report.budgets[i]) << " |";
    for (const auto& v : report.rank_correlation[i]) md << ' ' << (v ? fmt::format("{:.3f}", *v) : "undefined") << " |";
    md << "\n";
  }

  md << "\n## Footprint\n\n" << report.footprint.points.size() << " distinct configurations";
  if (report.footprint.stress) md << ", normalized stress " << fmt::format("{:.4g}", *report.footprint.stress);
  md << ".\n";
  if (report.footprint.note) md << "\n" << *report.footprint.note << "\n";
  return md.str();
}

void write_report(const AnalysisReport& report, const DesignSpace& space, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  write_file(out_dir / "report.json", report_to_json(report, space).dump(2) + "\n");

  std::string traj = "index,time,loss\r\n";
  for (const auto& p : report.trajectory)
    traj += fmt::format("{},{},{}\r\n", p.evaluation_index, num(p.finished_at), num(p.best_loss));
  write_file(out_dir / "trajectory.csv", traj);

  for (const auto& b : report.importance) {
    std::string csv = "hp,fanova_mean,fanova_std,lpi\r\n";
    for (std::size_t j = 0; j < space.dimension(); ++j) {
      csv += csv_field(space.hyperparameter(j).name);
      if (j < b.fanova.size())
        csv += "," + num(b.fanova[j].fraction_mean) + "," + num(b.fanova[j].fraction_std) + "," +
               (j < b.lpi.size() ? num(b.lpi[j]) : "");
      else
        csv += ",,,";
      csv += "\r\n";
    }
    write_file(out_dir / ("importance_" + budget_label(b.budget) + ".csv"), csv);
  }

  std::string corr = "budget";
  for (double b : report.budgets) corr += "," + budget_label(b);
  corr += "\r\n";
  for (std::size_t i = 0; i < report.budgets.size(); ++i) {
    corr += budget_label(report.budgets[i]);
    for (const auto& v : report.rank_correlation[i]) corr += "," + num(v);
    corr += "\r\n";
  }
  write_file(out_dir / "rank_correlation.csv", corr);

  std::string fp = "config_id,x,y,loss,budget,incumbent\r\n";
  for (const auto& p : report.footprint.points)
    fp += fmt::format("{},{},{},{},{},{}\r\n", p.config_id, num(p.x), num(p.y), num(p.loss), num(p.budget),
                      p.incumbent ? "true" : "false");
  write_file(out_dir / "footprint.csv", fp);

  write_file(out_dir / "report.md", report_markdown(report, space));
}

}  // namespace boah::analysis
