#include <cmath>
#include <random>

#include "boah/analysis/gower.hpp"
#include "boah/analysis/mds.hpp"
#include "boah/analysis/rank_correlation.hpp"
#include "support.hpp"

using namespace boah;
using namespace boah::analysis;

namespace {

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

// Quadratic-time average ranks.
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

double embedded(const Embedding& e, std::size_t i, std::size_t j) {
  double s = 0;
  for (std::size_t k = 0; k < e.dims; ++k) {
    const double d = e.coords[i * e.dims + k] - e.coords[j * e.dims + k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("rank_correlation") {
  TEST_CASE("perfect and reversed rankings") {
    const std::vector<double> a = {1, 2, 3};
    CHECK(spearman(a, std::vector<double>{2, 4, 6}) == std::optional<double>(1.0));
    CHECK(spearman(a, std::vector<double>{6, 4, 2}) == std::optional<double>(-1.0));
  }

  TEST_CASE("ties use average ranks") {
    const std::vector<double> a = {1, 2, 3, 4}, b = {1, 2, 2, 4};
    CHECK(average_ranks(b) == std::vector<double>{1, 2.5, 2.5, 4});
    const auto rho = spearman(a, b);
    REQUIRE(rho);
    CHECK(std::abs(*rho - pearson(brute_ranks(a), brute_ranks(b))) <= 1e-12);
  }

  TEST_CASE("undefined cases") {
    CHECK_FALSE(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}).has_value());
    CHECK_FALSE(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}).has_value());
  }

  TEST_CASE("invariant under increasing transforms") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0, 1);
    std::vector<double> a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a[i] = n(rng);
      b[i] = a[i] + n(rng);
    }
    auto ta = a, tb = b;
    for (auto& v : ta) v = std::exp(v);
    for (auto& v : tb) v = v * v * v + 2;
    CHECK(*spearman(a, b) == doctest::Approx(*spearman(ta, tb)).epsilon(1e-14));
  }

  TEST_CASE("history pairing averages repeated evaluations") {
    auto sp = std::make_shared<const DesignSpace>(
        DesignSpace::build({Hyperparameter::continuous("x", 0, 1, 0.5)}, {}));
    RunHistory h(sp, {1, 9});
    auto add = [&](std::int64_t id, double b, double loss) {
      TrialRecord r;
      r.config_id = id;
      r.budget = b;
      r.config = Configuration({0.5});
      r.loss = loss;
      h.append(r);
    };
    add(0, 1, 1);
    add(1, 1, 2);
    add(2, 1, 3);
    add(0, 9, 10);
    add(1, 9, 30);
    add(1, 9, 10);  // averaged to 20
    add(2, 9, 30);
    add(3, 9, 0);  // unpaired
    CHECK(spearman_rank_correlation(h, 1, 9) == std::optional<double>(1.0));
    RunHistory only9(sp, {1, 9});
    CHECK_FALSE(spearman_rank_correlation(only9, 1, 9).has_value());
  }
}

TEST_SUITE("gower") {
  TEST_CASE("examples") {
    const auto s = DesignSpace::build(
        {Hyperparameter::continuous("x", 0, 1, 0.5), Hyperparameter::categorical("c", {"p", "q"}, "p")}, {});
    const Configuration a({0.2, 0.0}), b({0.5, 0.0});
    CHECK(gower_distance(s, a, a) == 0.0);
    CHECK(gower_distance(s, a, b) == doctest::Approx(0.15));
    const auto cats = DesignSpace::build(
        {Hyperparameter::categorical("c1", {"p", "q"}, "p"), Hyperparameter::categorical("c2", {"p", "q"}, "p")}, {});
    CHECK(gower_distance(cats, Configuration({0.0, 0.0}), Configuration({1.0, 1.0})) == 1.0);
  }

  TEST_CASE("ordinal and activity rules") {
    const auto o = DesignSpace::build({Hyperparameter::ordinal("size", {"s", "m", "l"}, "s")}, {});
    CHECK(gower_distance(o, Configuration({0.0}), Configuration({1.0})) == 0.5);
    CHECK(gower_distance(o, Configuration({0.0}), Configuration({2.0})) == 1.0);
    const auto r = boah::test::rbf_space();
    CHECK(gower_distance(r, Configuration({1.0, std::nullopt}), Configuration({1.0, std::nullopt})) == 0.0);
    CHECK(gower_distance(r, Configuration({0.0, 0.1}), Configuration({1.0, std::nullopt})) == 1.0);
    CHECK_THROWS_KIND(gower_distance(r, Configuration({0.0}), Configuration({0.0, 0.1})), ErrorKind::SpaceMismatch);
  }

  TEST_CASE("matrix is symmetric with zero diagonal") {
    const auto r = boah::test::rbf_space();
    std::mt19937_64 rng(3);
    std::vector<Configuration> cs;
    for (int i = 0; i < 30; ++i) cs.push_back(r.sample(rng));
    const auto m = gower_matrix(r, cs);
    for (std::size_t i = 0; i < 30; ++i) {
      CHECK(m[i * 30 + i] == 0.0);
      for (std::size_t j = 0; j < 30; ++j) {
        CHECK(m[i * 30 + j] == m[j * 30 + i]);
        CHECK(m[i * 30 + j] == gower_distance(r, cs[i], cs[j]));
      }
    }
  }
}

TEST_SUITE("mds") {
  TEST_CASE("equilateral triangle") {
    const std::vector<double> d = {0, 0.5, 0.5, 0.5, 0, 0.5, 0.5, 0.5, 0};
    const auto e = mds_embed(d, 3);
    CHECK(e.stress <= 1e-6);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) CHECK(std::abs(embedded(e, i, j) - 0.5) <= 1e-3);
  }

  TEST_CASE("collinear points") {
    std::vector<double> d(16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) d[i * 4 + j] = std::abs(i - j) / 3.0;
    CHECK(mds_embed(d, 4).stress <= 1e-6);
  }

  TEST_CASE("all-zero matrix is degenerate") {
    const std::vector<double> d(9, 0.0);
    const auto e = mds_embed(d, 3);
    CHECK(e.degenerate);
    for (double c : e.coords) CHECK(c == 0.0);
  }

  TEST_CASE("invalid matrices") {
    CHECK_THROWS_KIND(mds_embed(std::vector<double>(4, 0.0), 2), ErrorKind::InvalidDistanceMatrix);
    CHECK_THROWS_KIND(mds_embed(std::vector<double>{0, 1, 1, 2, 0, 1, 1, 1, 0}, 3), ErrorKind::InvalidDistanceMatrix);
    CHECK_THROWS_KIND(mds_embed(std::vector<double>{0, -1, 1, -1, 0, 1, 1, 1, 0}, 3),
                      ErrorKind::InvalidDistanceMatrix);
    CHECK_THROWS_KIND(mds_embed(std::vector<double>{1, 1, 1, 1, 0, 1, 1, 1, 0}, 3), ErrorKind::InvalidDistanceMatrix);
  }

  TEST_CASE("stress never increases") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 5 + rep;
      std::vector<double> d(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = u(rng);
      const auto e = mds_embed(d, n);
      for (std::size_t k = 1; k < e.stress_history.size(); ++k)
        CHECK(e.stress_history[k] <= e.stress_history[k - 1]);
      CHECK(e.stress == e.stress_history.back());
    }
  }
}
