#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "boah/design_space.hpp"

namespace boah {

/// f_b(x) evaluated with a per-trial seed. Throwing, or returning a value
/// that is not finite, marks the trial FAILED. Must be safe to call from
/// several threads at once.
using Objective = std::function<double(const Configuration& config, double budget, std::uint64_t seed)>;

/// Process-wide number of objective evaluations started by the built-in
/// and subprocess objectives.
std::uint64_t objective_evaluations() noexcept;
void note_objective_evaluation() noexcept;

struct CommandOptions {
  std::vector<std::string> argv;
  std::chrono::milliseconds timeout{0};  // 0 = no limit
};

/// Runs argv once per trial. The child reads
///   {"config":{name:value|null},"budget":b,"seed":s}
/// on stdin and must print {"loss":x} on stdout. A non-zero exit, a signal,
/// a timeout or unparsable output throws ObjectiveError.
Objective make_command_objective(std::shared_ptr<const DesignSpace> space, CommandOptions options);

}  // namespace boah
