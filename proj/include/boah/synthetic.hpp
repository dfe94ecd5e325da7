#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "boah/design_space.hpp"
#include "boah/objective.hpp"

namespace boah::synthetic {

inline constexpr double kSphereSigma = 0.1;
inline constexpr double kMixedSigma = 0.05;

/// Number of averaged repetitions a budget stands for.
std::size_t repetitions(double budget) noexcept;

/// d continuous hyperparameters x1..xd on [0,1], default 0.
DesignSpace noisy_sphere_space(std::size_t d);

/// Mean over repetitions r of |x - 0.5|^2 + eps_r, eps_r ~ N(0, sigma^2)
/// drawn from combine_seeds({seed, r}).
double eval_noisy_sphere(const DesignSpace& space, const Configuration& config, double budget, std::uint64_t seed,
                         double sigma = kSphereSigma);

/// branch in {a, b}; child_a active iff branch = a, child_b iff branch = b.
DesignSpace conditional_mixed_space();

/// (child_a - 0.3)^2 + 0.1 on branch a, (child_b - 0.7)^2 on branch b, plus
/// N(0, sigma^2 / budget) noise. Throws InvalidConfiguration.
double eval_conditional_mixed(const DesignSpace& space, const Configuration& config, double budget,
                              std::uint64_t seed, double sigma = kMixedSigma);

struct SyntheticObjective {
  std::string name;
  std::shared_ptr<const DesignSpace> space;
  double sigma = 0.0;
  double optimum_loss = 0.0;
  Objective objective;
};

/// "noisy-sphere-d<k>" or "conditional-mixed". Throws ScenarioError.
SyntheticObjective make_builtin(const std::string& name);

}  // namespace boah::synthetic
