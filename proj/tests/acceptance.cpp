// Acceptance checks, one PASS/FAIL line per criterion. Exits 1 if any
// criterion fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "boah/analysis/forest.hpp"
#include "boah/analysis/gower.hpp"
#include "boah/analysis/importance.hpp"
#include "boah/analysis/mds.hpp"
#include "boah/analysis/rank_correlation.hpp"
#include "boah/cli/commands.hpp"
#include "boah/kde.hpp"
#include "boah/objective.hpp"
#include "boah/optimizer.hpp"
#include "boah/scheduler.hpp"
#include "boah/synthetic.hpp"

using namespace boah;
using namespace boah::analysis;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;
  std::function<Verdict()> check;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Quadratic-time average ranks, independent of the library's sort-based ranks.
std::vector<double> brute_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++equal;
    }
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Random mixed space; with `conditional`, some hyperparameters hang off an
// earlier categorical or ordinal parent.
DesignSpace random_space(std::mt19937_64& rng, bool conditional) {
  std::uniform_int_distribution<int> kind(0, 4), dim(1, 6), choices(2, 5);
  std::uniform_real_distribution<double> u(0, 1);
  const int d = dim(rng);
  std::vector<Hyperparameter> hps;
  std::vector<Condition> conds;
  std::vector<std::size_t> choice_parents;
  for (int i = 0; i < d; ++i) {
    const std::string name = "h" + std::to_string(i);
    switch (kind(rng)) {
      case 0: {
        const double lo = -5 + 10 * u(rng), hi = lo + 0.1 + 10 * u(rng);
        hps.push_back(Hyperparameter::continuous(name, lo, hi, lo + (hi - lo) * u(rng)));
        break;
      }
      case 1: {
        const double lo = std::pow(10.0, -6 + 4 * u(rng)), hi = lo * std::pow(10.0, 0.5 + 5 * u(rng));
        hps.push_back(Hyperparameter::continuous(name, lo, hi, lo, true));
        break;
      }
      case 2: {
        const double lo = std::floor(-10 + 20 * u(rng)), hi = lo + std::floor(1 + 30 * u(rng));
        hps.push_back(Hyperparameter::integer(name, lo, hi, lo));
        break;
      }
      default: {
        std::vector<std::string> cs;
        const int k = choices(rng);
        for (int c = 0; c < k; ++c) cs.push_back("c" + std::to_string(c));
        const auto first = cs.front();
        hps.push_back(kind(rng) % 2 ? Hyperparameter::categorical(name, cs, first)
                                    : Hyperparameter::ordinal(name, cs, first));
        choice_parents.push_back(static_cast<std::size_t>(i));
        break;
      }
    }
    if (conditional && !choice_parents.empty() && choice_parents.back() != static_cast<std::size_t>(i) &&
        u(rng) < 0.5) {
      const std::size_t p = choice_parents[std::uniform_int_distribution<std::size_t>(0, choice_parents.size() - 1)(rng)];
      conds.push_back({name, hps[p].name, {NativeValue(hps[p].choices[0])}});
    }
  }
  return DesignSpace::build(std::move(hps), std::move(conds));
}

Configuration fully_active_sample(const DesignSpace& space, std::mt19937_64& rng) {
  auto c = space.sample(rng);
  for (std::size_t i = 0; i < space.dimension(); ++i)
    if (!c[i]) c[i] = space.default_internal(i);
  return c;
}

Verdict criterion_brackets() {
  Verdict v;
  const auto p = plan_hyperband(1, 9, 3);
  v.require(p.size() == 3, "expected 3 brackets");
  if (!v.pass) return v;
  v.require(p[0] == BracketPlan{2, 9, {1, 3, 9}, {9, 3, 1}}, "s=2 bracket differs");
  v.require(p[1] == BracketPlan{1, 5, {3, 9}, {5, 1}}, "s=1 bracket differs");
  v.require(p[2] == BracketPlan{0, 3, {9}, {3}}, "s=0 bracket differs");
  v.detail = v.pass ? "9@[1,3,9]->[9,3,1]; 5@[3,9]->[5,1]; 3@[9]->[3]" : v.detail;
  return v;
}

// Losses are judged noise-free: the incumbent's expected loss, the same
// quantity as the default's 0.75.
Verdict criterion_incumbent_vs_default() {
  Verdict v;
  const auto sphere = synthetic::make_builtin("noisy-sphere-d3");
  const auto& space = *sphere.space;
  auto expected = [&](const Configuration& c) { return synthetic::eval_noisy_sphere(space, c, 1, 0, 0.0); };
  const double default_loss = expected(space.default_configuration());
  std::vector<double> bohb, random, bohb_observed, random_observed;
  double bohb_budget = 0, random_budget = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    OptimizerConfig cfg;
    cfg.b_min = 1;
    cfg.b_max = 9;
    cfg.eta = 3;
    cfg.n_iterations = 30;
    cfg.seed = seed;
    const auto a = fmin(sphere.objective, sphere.space, cfg);
    cfg.rho = 1.0;
    const auto b = fmin(sphere.objective, sphere.space, cfg);
    bohb.push_back(expected(*a.best_config));
    random.push_back(expected(*b.best_config));
    bohb_observed.push_back(*a.best_loss);
    random_observed.push_back(*b.best_loss);
    for (const auto& r : a.history.records()) bohb_budget += r.budget;
    for (const auto& r : b.history.records()) random_budget += r.budget;
  }
  const double bohb_median = median(bohb), random_median = median(random);
  const auto wins = std::count_if(bohb.begin(), bohb.end(), [&](double l) { return l < random_median; });
  const double random_observed_median = median(random_observed);
  const auto observed_wins = std::count_if(bohb_observed.begin(), bohb_observed.end(),
                                           [&](double l) { return l < random_observed_median; });
  v.require(default_loss == 0.75, "default expected loss is not 0.75");
  v.require(bohb_budget == random_budget, "total budgets differ");
  v.require(bohb_median < default_loss, "median incumbent not below the default");
  v.require(wins >= 8, fmt::format("only {}/10 seeds beat the rho=1 median", wins));
  v.detail = fmt::format(
      "median incumbent {:.4g} vs default {:.4g}; rho=1 median {:.4g}; {}/10 seeds below it "
      "(observed losses, informational: {}/10){}",
      bohb_median, default_loss, random_median, wins, observed_wins, v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_fanova() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 2500; ++i) {
    const double a = u(rng), b = u(rng);
    x.push_back({a, b});
    y.push_back(a + 2 * b);
  }
  const auto forest = fit_forest(x, y, std::vector<FeatureInfo>(2), ForestParams{});
  const auto f1 = fanova_importance(forest, {0}), f2 = fanova_importance(forest, {1});
  v.require(std::abs(f1.fraction_mean - 0.2) <= 0.05, "x1 fraction outside 0.20 +- 0.05");
  v.require(std::abs(f2.fraction_mean - 0.8) <= 0.05, "x2 fraction outside 0.80 +- 0.05");
  v.require(f1.fraction_std < 0.05 && f2.fraction_std < 0.05, "across-tree std not below 0.05");
  v.detail = fmt::format("x1 {:.4f} (std {:.4f}), x2 {:.4f} (std {:.4f}){}", f1.fraction_mean, f1.fraction_std,
                         f2.fraction_mean, f2.fraction_std, v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_lpi() {
  Verdict v;
  const auto space = DesignSpace::build(
      {Hyperparameter::continuous("x1", 0, 1, 0.5), Hyperparameter::continuous("x2", 0, 1, 0.5)}, {});
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 2500; ++i) {
    const double a = u(rng), b = u(rng);
    x.push_back({a, b});
    y.push_back(a * a);
  }
  const auto forest = fit_forest(x, y, std::vector<FeatureInfo>(2), ForestParams{});
  const auto l = lpi_all(forest, space, Configuration({0.5, 0.5}));
  v.require(l[0] >= 0.9, "lpi(x1) below 0.9");
  v.require(l[1] <= 0.1, "lpi(x2) above 0.1");
  v.detail = fmt::format("lpi(x1) {:.4f}, lpi(x2) {:.4f}{}", l[0], l[1], v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_rank_correlation() {
  Verdict v;
  auto space = std::make_shared<const DesignSpace>(
      DesignSpace::build({Hyperparameter::continuous("x", 0, 1, 0.5)}, {}));
  std::mt19937_64 rng(99);
  double worst = 0;
  std::size_t defined = 0;
  for (int set = 0; set < 1000; ++set) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 40)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 12)(rng);  // few levels force ties
    std::uniform_int_distribution<int> level(0, levels - 1);
    RunHistory h(space, {1, 9});
    std::vector<double> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(level(rng));
      b.push_back(level(rng) + 0.5 * a.back());
      for (double budget : {1.0, 9.0}) {
        TrialRecord r;
        r.config_id = static_cast<std::int64_t>(i);
        r.budget = budget;
        r.config = Configuration({0.5});
        r.loss = budget == 1.0 ? a.back() : b.back();
        h.append(r);
      }
    }
    const auto rho = spearman_rank_correlation(h, 1, 9);
    const double oracle = pearson(brute_ranks(a), brute_ranks(b));
    if (!std::isfinite(oracle)) {
      v.require(!rho.has_value(), "defined where the oracle is undefined");
      continue;
    }
    v.require(rho.has_value(), "undefined where the oracle is defined");
    if (!rho) continue;
    ++defined;
    worst = std::max(worst, std::abs(*rho - oracle));
  }
  v.require(worst <= 1e-12, "deviation above 1e-12");
  const std::vector<double> x = {1, 2, 3};
  v.require(spearman(x, std::vector<double>{2, 4, 6}) == std::optional<double>(1.0), "identical ranking is not 1");
  v.require(spearman(x, std::vector<double>{6, 4, 2}) == std::optional<double>(-1.0), "reversed ranking is not -1");
  v.detail = fmt::format("{} defined sets, max |rho - oracle| = {:.3g}; trivial cases exact{}", defined, worst,
                         v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_kde() {
  Verdict v;
  auto fit1d = [](const std::vector<double>& xs) {
    std::vector<std::vector<double>> pts;
    for (double x : xs) pts.push_back({x});
    return Kde::fit(pts, {KernelKind::truncated_gaussian}, {0});
  };
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_integral = 0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xs(1 + rep * 3);
    for (auto& x : xs) x = u(rng);
    const auto k = fit1d(xs);
    const int n = 10000;
    double integral = 0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      integral += w * k.density(std::vector<double>{static_cast<double>(i) / n});
    }
    integral /= n;
    worst_integral = std::max(worst_integral, std::abs(integral - 1));
  }
  const auto sym = fit1d({0.1, 0.9, 0.3, 0.7, 0.45, 0.55, 0.02, 0.98});
  double worst_sym = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = i / 10000.0;
    worst_sym = std::max(worst_sym, std::abs(sym.density(std::vector<double>{x}) -
                                             sym.density(std::vector<double>{1.0 - x})));
  }
  v.require(worst_integral <= 1e-2, "integral deviates by more than 1e-2");
  v.require(worst_sym <= 1e-12, "mirror asymmetry above 1e-12");
  v.detail = fmt::format("max |integral - 1| = {:.3g}; max mirror gap = {:.3g}", worst_integral, worst_sym);
  return v;
}

Verdict criterion_determinism() {
  Verdict v;
  const auto root = std::filesystem::temp_directory_path() / "boah_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  std::ofstream(root / "scenario.json") << R"({
    "objective": {"builtin": "noisy-sphere-d2"},
    "min_budget": 1, "max_budget": 9, "eta": 3, "iterations": 12, "workers": 1, "seed": 42,
    "output_dir": "out"
  })";
  std::ostringstream sink;
  auto run = [&](const char* dir) {
    cli::RunOptions o;
    o.scenario = root / "scenario.json";
    o.output = root / dir;
    return cli::cmd_run(o, sink, sink);
  };
  v.require(run("a") == cli::kExitOk && run("b") == cli::kExitOk, "cmd_run failed");
  const auto a = slurp(root / "a" / "history.jsonl"), b = slurp(root / "b" / "history.jsonl");
  v.require(!a.empty() && a == b, "history.jsonl differs between runs");
  const auto before = objective_evaluations();
  cli::ReportOptions r;
  r.history = root / "a" / "history.jsonl";
  r.space = root / "a" / "space.json";
  r.out_dir = root / "report";
  v.require(cli::cmd_report(r, sink, sink) == cli::kExitOk, "cmd_report failed");
  const auto evaluations = objective_evaluations() - before;
  v.require(evaluations == 0, "cmd_report evaluated the objective");
  v.detail = fmt::format("{} bytes identical across runs; report performed {} evaluations{}", a.size(), evaluations,
                         v.pass ? "" : "; " + v.detail);
  std::filesystem::remove_all(root);
  return v;
}

Verdict criterion_mds() {
  Verdict v;
  const auto tri = mds_embed(std::vector<double>{0, 0.5, 0.5, 0.5, 0, 0.5, 0.5, 0.5, 0}, 3);
  std::vector<double> line(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) line[static_cast<std::size_t>(i * 4 + j)] = std::abs(i - j) / 3.0;
  const auto col = mds_embed(line, 4);
  v.require(tri.stress <= 1e-6, "triangle stress above 1e-6");
  v.require(col.stress <= 1e-6, "collinear stress above 1e-6");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::size_t increases = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + static_cast<std::size_t>(rep % 30);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = u(rng);
    const auto e = mds_embed(d, n);
    for (std::size_t k = 1; k < e.stress_history.size(); ++k)
      if (e.stress_history[k] > e.stress_history[k - 1]) ++increases;
  }
  v.require(increases == 0, fmt::format("{} stress increases", increases));
  v.detail = fmt::format("triangle stress {:.3g}, collinear stress {:.3g}, {} increases over 100 matrices{}",
                         tri.stress, col.stress, increases, v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict criterion_gower() {
  Verdict v;
  std::mt19937_64 rng(9);
  std::size_t violations = 0;
  double worst_excess = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto space = random_space(rng, false);
    const auto a = fully_active_sample(space, rng), b = fully_active_sample(space, rng),
               c = fully_active_sample(space, rng);
    const double ab = gower_distance(space, a, b), ba = gower_distance(space, b, a);
    const double bc = gower_distance(space, b, c), ac = gower_distance(space, a, c);
    const bool ok = ab == ba && gower_distance(space, a, a) == 0.0 && (ab > 0.0) == !(a == b) &&
                    ac <= ab + bc + 1e-12 && ab >= 0 && ab <= 1;
    worst_excess = std::max(worst_excess, ac - ab - bc);
    if (!ok) ++violations;
  }
  v.require(violations == 0, fmt::format("{} violating triples", violations));
  v.detail = fmt::format("10000 triples, {} violations, max d(a,c) - d(a,b) - d(b,c) = {:.3g}", violations,
                         worst_excess);
  return v;
}

Verdict criterion_design_space() {
  Verdict v;
  std::mt19937_64 rng(10);
  std::size_t invalid = 0, roundtrip = 0, activity = 0, monotone = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto space = random_space(rng, true);
    const auto c = space.sample(rng);
    if (!space.check_validity(c).empty()) ++invalid;
    if (!(space.with_activity_recomputed(c, space.default_configuration()) == c)) ++activity;

    const auto full = fully_active_sample(space, rng);
    const auto back = space.from_unit_vector(space.to_unit_vector(c).vector);
    bool same = back.size() == c.size();
    for (std::size_t i = 0; same && i < c.size(); ++i) {
      if (c[i].has_value() != back[i].has_value()) same = false;
      else if (c[i] && space.hyperparameter(i).kind == HpKind::continuous)
        same = std::abs(*back[i] - *c[i]) <= 1e-12 * std::max(1.0, std::abs(*c[i]));
      else same = c[i] == back[i];
    }
    if (!same) ++roundtrip;

    for (std::size_t i = 0; i < space.dimension(); ++i) {
      const auto& hp = space.hyperparameter(i);
      if (hp.kind != HpKind::continuous || !hp.log_scale) continue;
      const double x = *full[i], y = std::min(hp.upper, x * 1.001);
      if (y > x && !(space.encode(i, y) > space.encode(i, x))) ++monotone;
    }
  }
  v.require(invalid == 0, fmt::format("{} invalid samples", invalid));
  v.require(roundtrip == 0, fmt::format("{} round-trip mismatches", roundtrip));
  v.require(activity == 0, fmt::format("{} activity changes", activity));
  v.require(monotone == 0, fmt::format("{} log-encoding monotonicity failures", monotone));
  v.detail = fmt::format("10000 random spaces: {} invalid samples, {} round-trip mismatches, {} activity changes, "
                         "{} monotonicity failures",
                         invalid, roundtrip, activity, monotone);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "bracket arithmetic", 1, criterion_brackets},
      {2, "incumbent vs default", 120, criterion_incumbent_vs_default},
      {3, "fANOVA analytic recovery", 30, criterion_fanova},
      {4, "LPI sanity", 10, criterion_lpi},
      {5, "rank-correlation oracle", 5, criterion_rank_correlation},
      {6, "KDE normalization and symmetry", 5, criterion_kde},
      {7, "determinism", 60, criterion_determinism},
      {8, "MDS exact embeddability", 10, criterion_mds},
      {9, "Gower metric properties", 10, criterion_gower},
      {10, "design-space round trip", 10, criterion_design_space},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds >= c.limit_seconds) {
      v.pass = false;
      v.detail += fmt::format("; runtime limit {} s exceeded", c.limit_seconds);
    }
    std::cout << fmt::format("{} criterion {} ({}): {} [{:.2f} s, limit {} s]\n", v.pass ? "PASS" : "FAIL", c.number,
                             c.name, v.detail, seconds, c.limit_seconds)
              << std::flush;
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
