#include <cmath>
#include <random>

#include "boah/analysis/rank_correlation.hpp"
#include "boah/synthetic.hpp"
#include "support.hpp"

using namespace boah;
using namespace boah::synthetic;

namespace {

Configuration point(std::size_t d, double v) { return Configuration(std::vector<std::optional<double>>(d, v)); }

double sample_variance(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double mean(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

}  // namespace

TEST_SUITE("synthetic") {
  TEST_CASE("noiseless sphere values") {
    const auto s3 = noisy_sphere_space(3);
    for (double b : {1.0, 3.0, 9.0}) CHECK(eval_noisy_sphere(s3, point(3, 0.5), b, 11, 0.0) == 0.0);
    const auto s1 = noisy_sphere_space(1);
    for (double b : {1.0, 3.0, 9.0}) CHECK(eval_noisy_sphere(s1, point(1, 0.0), b, 11, 0.0) == 0.25);
  }

  TEST_CASE("evaluation is deterministic in (config, budget, seed)") {
    const auto s = noisy_sphere_space(2);
    const auto c = point(2, 0.2);
    CHECK(eval_noisy_sphere(s, c, 3, 42) == eval_noisy_sphere(s, c, 3, 42));
    CHECK(eval_noisy_sphere(s, c, 3, 42) != eval_noisy_sphere(s, c, 3, 43));
  }

  TEST_CASE("noise variance shrinks as sigma^2 / b") {
    const auto s = noisy_sphere_space(2);
    const auto opt = point(2, 0.5);
    std::vector<double> b1, b9;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      b1.push_back(eval_noisy_sphere(s, opt, 1, seed));
      b9.push_back(eval_noisy_sphere(s, opt, 9, seed));
    }
    const double ratio = sample_variance(b9) / sample_variance(b1);
    CHECK(ratio >= 1.0 / 12.0);
    CHECK(ratio <= 1.0 / 6.0);
  }

  TEST_CASE("averaging is unbiased across fidelities") {
    const auto s = noisy_sphere_space(2);
    const auto c = point(2, 0.1);
    std::vector<double> b1, b9;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      b1.push_back(eval_noisy_sphere(s, c, 1, seed));
      b9.push_back(eval_noisy_sphere(s, c, 9, seed + 100000));
    }
    CHECK(std::abs(mean(b1) - mean(b9)) <= 3.0 * kSphereSigma / std::sqrt(2000.0));
  }

  TEST_CASE("conditional-mixed examples") {
    const auto s = conditional_mixed_space();
    const Configuration best({1.0, std::nullopt, 0.7});
    CHECK(std::abs(eval_conditional_mixed(s, best, 1e4, 5)) <= 0.002);
    const Configuration a({0.0, 0.3, std::nullopt});
    CHECK(std::abs(eval_conditional_mixed(s, a, 1e4, 5) - 0.1) <= 0.002);
    CHECK_THROWS_KIND(eval_conditional_mixed(s, Configuration({1.0, 0.3, 0.7}), 1, 0), ErrorKind::InvalidConfiguration);
    CHECK_THROWS_KIND(eval_conditional_mixed(s, Configuration({1.0, 0.3, std::nullopt}), 1, 0),
                      ErrorKind::InvalidConfiguration);
  }

  TEST_CASE("budgets are strongly rank-correlated") {
    const auto s = noisy_sphere_space(3);
    std::mt19937_64 rng(17);
    std::vector<double> low, high;
    for (int i = 0; i < 50; ++i) {
      const auto c = s.sample(rng);
      double l = 0, h = 0;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        l += eval_noisy_sphere(s, c, 1, 1000 * static_cast<std::uint64_t>(i) + seed);
        h += eval_noisy_sphere(s, c, 9, 1000 * static_cast<std::uint64_t>(i) + seed + 500);
      }
      low.push_back(l / 20);
      high.push_back(h / 20);
    }
    const auto rho = analysis::spearman(low, high);
    REQUIRE(rho);
    CHECK(*rho >= 0.8);
  }

  TEST_CASE("builtin registry") {
    const auto sphere = make_builtin("noisy-sphere-d3");
    CHECK(sphere.space->dimension() == 3);
    CHECK(sphere.sigma == kSphereSigma);
    const auto mixed = make_builtin("conditional-mixed");
    CHECK(mixed.space->dimension() == 3);
    for (const char* bad : {"noisy-sphere-d0", "noisy-sphere-d", "noisy-sphere-dx", "cartpole"})
      CHECK_THROWS_KIND(make_builtin(bad), ErrorKind::ScenarioError);
    CHECK(repetitions(0.2) == 1);
    CHECK(repetitions(9.0) == 9);
  }
}
