#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace boah {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of several words into one seed.
constexpr std::uint64_t combine_seeds(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Seed handed to the objective for one (configuration, budget) evaluation.
inline std::uint64_t trial_seed(std::uint64_t run_seed, std::int64_t config_id, double budget) noexcept {
  return combine_seeds({run_seed, static_cast<std::uint64_t>(config_id), std::bit_cast<std::uint64_t>(budget)});
}

}  // namespace boah
