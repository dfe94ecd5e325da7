#include "boah/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <random>

#include "boah/error.hpp"
#include "boah/seeding.hpp"

namespace boah::synthetic {

std::size_t repetitions(double budget) noexcept {
  const long long r = std::llround(budget);
  return r < 1 ? 1 : static_cast<std::size_t>(r);
}

DesignSpace noisy_sphere_space(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::ConfigurationError, "sphere dimension must be >= 1");
  std::vector<Hyperparameter> hps;
  for (std::size_t i = 1; i <= d; ++i) hps.push_back(Hyperparameter::continuous("x" + std::to_string(i), 0.0, 1.0, 0.0));
  return DesignSpace::build(std::move(hps), {});
}

double eval_noisy_sphere(const DesignSpace& space, const Configuration& config, double budget, std::uint64_t seed,
                         double sigma) {
  note_objective_evaluation();
  if (config.size() != space.dimension()) throw Error(ErrorKind::InvalidConfiguration, "dimension mismatch");
  double dist = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!config[i]) throw Error(ErrorKind::InvalidConfiguration, "sphere coordinates are always active");
    const double diff = *config[i] - 0.5;
    dist += diff * diff;
  }
  const std::size_t reps = repetitions(budget);
  double total = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    double eps = 0.0;
    if (sigma > 0.0) {
      std::mt19937_64 rng(combine_seeds({seed, r}));
      eps = std::normal_distribution<double>(0.0, sigma)(rng);
    }
    total += dist + eps;
  }
  return total / static_cast<double>(reps);
}

DesignSpace conditional_mixed_space() {
  return DesignSpace::build(
      {Hyperparameter::categorical("branch", {"a", "b"}, "a"), Hyperparameter::continuous("child_a", 0.0, 1.0, 0.5),
       Hyperparameter::continuous("child_b", 0.0, 1.0, 0.5)},
      {{"child_a", "branch", {std::string("a")}}, {"child_b", "branch", {std::string("b")}}});
}

double eval_conditional_mixed(const DesignSpace& space, const Configuration& config, double budget,
                              std::uint64_t seed, double sigma) {
  note_objective_evaluation();
  if (const auto v = space.check_validity(config); !v.empty())
    throw Error(ErrorKind::InvalidConfiguration, v.front().hyperparameter + ": " + v.front().detail);
  const auto branch = space.index_of("branch").value();
  double loss = 0.0;
  if (*config[branch] == 0.0) {
    const double c = *config[space.index_of("child_a").value()] - 0.3;
    loss = c * c + 0.1;
  } else {
    const double c = *config[space.index_of("child_b").value()] - 0.7;
    loss = c * c;
  }
  if (sigma > 0.0) {
    std::mt19937_64 rng(combine_seeds({seed, 0}));
    loss += std::normal_distribution<double>(0.0, sigma / std::sqrt(std::max(budget, 1e-12)))(rng);
  }
  return loss;
}

SyntheticObjective make_builtin(const std::string& name) {
  SyntheticObjective out;
  out.name = name;
  if (name == "conditional-mixed") {
    auto space = std::make_shared<const DesignSpace>(conditional_mixed_space());
    out.space = space;
    out.sigma = kMixedSigma;
    out.objective = [space](const Configuration& c, double b, std::uint64_t s) {
      return eval_conditional_mixed(*space, c, b, s);
    };
    return out;
  }
  constexpr std::string_view prefix = "noisy-sphere-d";
  if (name.starts_with(prefix)) {
    std::size_t d = 0;
    const char* first = name.data() + prefix.size();
    const char* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec == std::errc() && ptr == last && first != last && d >= 1) {
      auto space = std::make_shared<const DesignSpace>(noisy_sphere_space(d));
      out.space = space;
      out.sigma = kSphereSigma;
      out.objective = [space](const Configuration& c, double b, std::uint64_t s) {
        return eval_noisy_sphere(*space, c, b, s);
      };
      return out;
    }
  }
  throw Error(ErrorKind::ScenarioError, "objective.builtin: unknown builtin '" + name + "'");
}

}  // namespace boah::synthetic
