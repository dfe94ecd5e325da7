// Serial reference vs OpenMP variants of the data-parallel kernels.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "boah/analysis/forest.hpp"
#include "boah/design_space.hpp"
#include "boah/kde.hpp"
#include "boah/kernels.hpp"

using namespace boah;

namespace {

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Kde make_kde(std::size_t points, std::size_t d) {
  const auto flat = uniform(points * d, 1);
  std::vector<std::vector<double>> pts(points);
  for (std::size_t i = 0; i < points; ++i) pts[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * d),
                                                         flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
  return Kde::fit(pts, std::vector<KernelKind>(d, KernelKind::truncated_gaussian), std::vector<std::size_t>(d, 0));
}

template <void (*Kernel)(const Kde&, std::span<const double>, std::span<double>)>
void bm_kde(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kde = make_kde(200, 6);
  const auto q = uniform(n * 6, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    Kernel(kde, q, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

template <void (*Kernel)(const DesignSpace&, const std::vector<Configuration>&, std::span<double>)>
void bm_gower(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto space = DesignSpace::build(
      {Hyperparameter::categorical("kernel", {"rbf", "linear"}, "rbf"),
       Hyperparameter::continuous("gamma", 1e-5, 10.0, 0.1, true), Hyperparameter::integer("depth", 1, 16, 4),
       Hyperparameter::ordinal("size", {"s", "m", "l"}, "m")},
      {{"gamma", "kernel", {std::string("rbf")}}});
  std::mt19937_64 rng(3);
  std::vector<Configuration> cs;
  for (std::size_t i = 0; i < n; ++i) cs.push_back(space.sample(rng));
  std::vector<double> out(n * n);
  for (auto _ : state) {
    Kernel(space, cs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

template <void (*Kernel)(const analysis::ForestSurrogate&, std::span<const double>, std::span<double>)>
void bm_forest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto flat = uniform(1000 * 4, 4);
  std::vector<std::vector<double>> x(1000);
  std::vector<double> y(1000);
  for (std::size_t i = 0; i < 1000; ++i) {
    x[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * 4), flat.begin() + static_cast<std::ptrdiff_t>(i * 4 + 4));
    y[i] = x[i][0] + 2 * x[i][1] * x[i][2];
  }
  const auto forest = analysis::fit_forest(x, y, std::vector<analysis::FeatureInfo>(4), {});
  const auto rows = uniform(n * 4, 5);
  std::vector<double> out(n);
  for (auto _ : state) {
    Kernel(forest, rows, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

template <void (*Kernel)(std::span<const double>, std::span<const double>, std::size_t, std::size_t,
                         std::span<double>)>
void bm_guttman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = uniform(n * 2, 6);
  auto delta = uniform(n * n, 7);
  for (std::size_t i = 0; i < n; ++i) {
    delta[i * n + i] = 0.0;
    for (std::size_t j = 0; j < i; ++j) delta[i * n + j] = delta[j * n + i];
  }
  std::vector<double> out(n * 2);
  for (auto _ : state) {
    Kernel(x, delta, n, 2, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

}  // namespace

BENCHMARK(bm_kde<kernels::serial::kde_log_density>)->Name("kde_log_density/serial")->Arg(1024)->Arg(16384);
BENCHMARK(bm_kde<kernels::omp::kde_log_density>)->Name("kde_log_density/omp")->Arg(1024)->Arg(16384);
BENCHMARK(bm_gower<kernels::serial::gower_matrix>)->Name("gower_matrix/serial")->Arg(256)->Arg(1024);
BENCHMARK(bm_gower<kernels::omp::gower_matrix>)->Name("gower_matrix/omp")->Arg(256)->Arg(1024);
BENCHMARK(bm_forest<kernels::serial::forest_predict>)->Name("forest_predict/serial")->Arg(1024)->Arg(16384);
BENCHMARK(bm_forest<kernels::omp::forest_predict>)->Name("forest_predict/omp")->Arg(1024)->Arg(16384);
BENCHMARK(bm_guttman<kernels::serial::guttman_transform>)->Name("guttman_transform/serial")->Arg(256)->Arg(1024);
BENCHMARK(bm_guttman<kernels::omp::guttman_transform>)->Name("guttman_transform/omp")->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
