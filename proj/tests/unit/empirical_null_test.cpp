#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mtconf/empirical_null.hpp"
#include "mtconf/error.hpp"
#include "mtconf/simulation.hpp"

using namespace mtconf;

namespace {

SimulatedData pure_null(std::uint64_t seed) {
  SimConfig c;
  c.g = 10000;
  c.pi0 = 1.0;
  c.seed = seed;
  return simulate(c);
}

SimulatedData confounded(std::uint64_t seed) {
  SimConfig c;
  c.g = 10000;
  c.pi0 = 0.9;
  c.null_model = NullModel::shifted_scaled;
  c.delta0 = 0.5;
  c.sigma0 = 1.2;
  c.alt_mean = 3.5;
  c.seed = seed;
  return simulate(c);
}

}  // namespace

TEST_CASE("pure null recovery") {
  const auto fit = fit_empirical_null(pure_null(21).stats);
  CHECK(std::abs(fit.delta0) <= 0.1);
  CHECK(fit.sigma0 >= 0.9);
  CHECK(fit.sigma0 <= 1.1);
  CHECK(fit.pi0 >= 0.9);
  CHECK(fit.pi0 <= 1.0);
}

TEST_CASE("confounded null recovery") {
  const auto fit = fit_empirical_null(confounded(22).stats);
  CHECK(std::abs(fit.delta0 - 0.5) <= 0.15);
  CHECK(std::abs(fit.sigma0 - 1.2) <= 0.15);
}

TEST_CASE("mixture identity holds on the grid") {
  const auto fit = fit_empirical_null(confounded(23).stats);
  for (std::size_t i = 0; i < fit.f.grid.size(); ++i) {
    const double mix = fit.pi0 * fit.f0.f[i] + (1.0 - fit.pi0) * fit.f1.f[i];
    CHECK(std::abs(mix - fit.f.f[i]) <= 1e-12);
  }
}

TEST_CASE("no peak inside the window") {
  SimConfig c;
  c.g = 5000;
  c.pi0 = 0.0;
  c.alt_mean = 8.0;
  c.seed = 3;
  const auto stats = simulate(c).stats;
  EmpiricalNullOptions opt;
  opt.window = std::pair{-1.0, 1.0};
  CHECK_THROWS_WITH_AS(fit_empirical_null(stats, opt), doctest::Contains("window does not contain a density peak"),
                       Error);
}

TEST_CASE("local fdr") {
  SUBCASE("near one at the null mode") {
    const auto fit = fit_empirical_null(pure_null(31).stats);
    const std::vector<double> t{fit.delta0};
    CHECK(local_fdr(t, fit)[0] >= 0.9);
  }
  SUBCASE("small far in the alternative tail") {
    const auto fit = fit_empirical_null(confounded(32).stats);
    const std::vector<double> t{4.0};
    CHECK(local_fdr(t, fit)[0] <= 0.2);
  }
  SUBCASE("bounded and one outside the grid") {
    const auto fit = fit_empirical_null(confounded(33).stats);
    const std::vector<double> t{-100.0, -2.0, 0.0, 2.0, 5.0, 100.0};
    const auto l = local_fdr(t, fit);
    for (double v : l) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(l.front() == 1.0);
    CHECK(l.back() == 1.0);
  }
}

TEST_CASE("local fdr reduces to f0 / f when pi0 is one") {
  auto fit = fit_empirical_null(confounded(34).stats);
  fit.pi0 = 1.0;
  for (double t = -3.0; t <= 5.0; t += 0.5) {
    const std::vector<double> x{t};
    CHECK(local_fdr(x, fit)[0] == doctest::Approx(std::min(1.0, fit.f0.at(t) / fit.f.at(t))));
  }
}

TEST_CASE("null location follows a shift of the data") {
  auto stats = pure_null(41).stats;
  const auto a = fit_empirical_null(stats);
  for (double& v : stats) v += 1.0;
  const auto b = fit_empirical_null(stats);
  CHECK(std::abs((b.delta0 - a.delta0) - 1.0) <= 0.02);
  CHECK(std::abs(b.sigma0 - a.sigma0) <= 0.02);
}

TEST_CASE("scale from known nulls") {
  const auto unit = pure_null(51).stats;
  std::vector<double> k1(unit.begin(), unit.begin() + 1000);
  const double s1 = null_scale_from_known_nulls(k1);
  CHECK(s1 >= 0.93);
  CHECK(s1 <= 1.07);
  for (double& v : k1) v *= 2.0;
  const double s2 = null_scale_from_known_nulls(k1);
  CHECK(s2 == 2.0 * s1);
  CHECK_THROWS_AS(null_scale_from_known_nulls(std::vector<double>(100, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(null_scale_from_known_nulls(std::vector<double>(19, 1.0)), InvalidArgument);
}

TEST_CASE("stratified tests") {
  ExpressionSimConfig c;
  c.genes = 50;
  c.samples = 40;
  c.seed = 9;
  const auto sim = simulate_expression(c);
  SUBCASE("one stratum equals the pooled analysis") {
    const std::vector<int> strata(sim.matrix.samples(), 0);
    const auto s = stratified_tests(sim.matrix, strata);
    REQUIRE(s.size() == 1);
    CHECK(s[0].tests.results == unpooled_t_tests(sim.matrix).results);
  }
  SUBCASE("a label-swapped copy gives the same |t|") {
    const std::size_t n = sim.matrix.samples();
    std::vector<double> values;
    std::vector<int> labels = sim.matrix.labels();
    for (int l : sim.matrix.labels()) labels.push_back(1 - l);
    for (std::size_t g = 0; g < sim.matrix.genes(); ++g) {
      const auto row = sim.matrix.row(g);
      values.insert(values.end(), row.begin(), row.end());
      values.insert(values.end(), row.begin(), row.end());
    }
    ExpressionMatrix doubled(values, sim.matrix.gene_ids(), labels);
    std::vector<int> strata(2 * n, 0);
    std::fill(strata.begin() + static_cast<std::ptrdiff_t>(n), strata.end(), 1);
    const auto s = stratified_tests(doubled, strata);
    REQUIRE(s.size() == 2);
    for (std::size_t g = 0; g < s[0].tests.results.size(); ++g)
      CHECK(std::abs(s[0].tests.results[g].t) == std::abs(s[1].tests.results[g].t));
  }
  SUBCASE("an undersized stratum is named") {
    std::vector<int> strata(sim.matrix.samples(), 0);
    strata[0] = 7;
    CHECK_THROWS_WITH(stratified_tests(sim.matrix, strata), doctest::Contains("stratum 7"));
  }
}
