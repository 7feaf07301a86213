#include <doctest.h>

#include <algorithm>
#include <vector>

#include "mtconf/error.hpp"
#include "mtconf/fdr.hpp"
#include "mtconf/rng.hpp"

using namespace mtconf;

namespace {

std::vector<double> uniform_p(std::size_t g, std::uint64_t seed) {
  const rng::Stream s(seed, 99);
  std::vector<double> p(g);
  for (std::size_t i = 0; i < g; ++i) p[i] = s.uniform(i);
  return p;
}

}  // namespace

TEST_CASE("raw pi0 at a single lambda") {
  std::vector<double> p;
  for (int r = 0; r < 3; ++r)
    for (double v : {0.2, 0.4, 0.6, 0.8}) p.push_back(v);
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7};
  const auto est = estimate_pi0(p, grid);
  CHECK(est.raw[2] == doctest::Approx(1.0));
}

TEST_CASE("raw estimates match a direct count") {
  const auto p = uniform_p(5000, 3);
  const auto est = estimate_pi0(p);
  REQUIRE(est.lambda_grid.size() == 19);
  for (std::size_t l = 0; l < est.lambda_grid.size(); ++l) {
    const double lambda = est.lambda_grid[l];
    const auto above = std::count_if(p.begin(), p.end(), [&](double v) { return v > lambda; });
    CHECK(est.raw[l] == doctest::Approx(above / (5000.0 * (1.0 - lambda))));
  }
  CHECK(est.pi0 >= 1.0 / 5000.0);
  CHECK(est.pi0 <= 1.0);
}

TEST_CASE("pi0 input validation") {
  const auto p = uniform_p(100, 1);
  const std::vector<double> short_grid{0.2, 0.4, 0.6};
  CHECK_THROWS_AS(estimate_pi0(p, short_grid), InvalidArgument);
  auto bad = p;
  bad[7] = 1.5;
  CHECK_THROWS_AS(estimate_pi0(bad), InvalidArgument);
  bad[7] = -0.1;
  CHECK_THROWS_AS(estimate_pi0(bad), InvalidArgument);
}

TEST_CASE("q-values on three hypotheses") {
  const std::vector<double> p{0.01, 0.02, 0.9};
  const auto q = qvalues(p, 1.0);
  CHECK(q.q[0] == doctest::Approx(0.03));
  CHECK(q.q[1] == doctest::Approx(0.03));
  CHECK(q.q[2] == doctest::Approx(0.9));
}

TEST_CASE("q-value base cases") {
  const std::vector<double> one{0.04};
  CHECK(qvalues(one, 0.7).q[0] == doctest::Approx(0.028));
  const std::vector<double> flat(6, 0.3);
  for (double q : qvalues(flat, 1.0).q) CHECK(q == doctest::Approx(0.3));
  CHECK_THROWS_AS(qvalues(std::vector<double>{}, 1.0), InvalidArgument);
}

TEST_CASE("q-values are monotone in p and in pi0") {
  const auto p = uniform_p(2000, 8);
  const auto a = qvalues(p, 0.6);
  const auto b = qvalues(p, 0.9);
  const auto order = order_by_pvalue(p);
  for (std::size_t k = 1; k < order.size(); ++k) CHECK(a.q[order[k - 1]] <= a.q[order[k]]);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(a.q[i] <= b.q[i]);
    CHECK(a.q[i] >= 0.0);
    CHECK(b.q[i] <= 1.0);
  }
}

TEST_CASE("bh step-up") {
  const std::vector<double> p{0.01, 0.02, 0.9};
  const auto r = bh_procedure(p, 0.05);
  CHECK(r.k_hat == 2);
  CHECK(r.rejected == std::vector<std::size_t>{0, 1});
  CHECK(bh_procedure(std::vector<double>(10, 1.0), 0.05).k_hat == 0);
  CHECK(bh_procedure(std::vector<double>(10, 0.0), 0.05).k_hat == 10);
}

TEST_CASE("bh rejections shrink with alpha") {
  const auto p = uniform_p(3000, 12);
  auto q = p;
  for (std::size_t i = 0; i < 300; ++i) q[i] = p[i] * 1e-3;
  std::size_t prev = 0;
  for (double alpha : {0.001, 0.01, 0.05, 0.1, 0.2}) {
    const auto r = bh_procedure(q, alpha);
    CHECK(r.k_hat >= prev);
    prev = r.k_hat;
  }
}

TEST_CASE("bh agrees with q-values at pi0 = 1") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = uniform_p(1000, seed);
    for (std::size_t i = 0; i < 100; ++i) p[i] *= 1e-3;
    const auto q = qvalues(p, 1.0);
    const auto r = bh_procedure(p, 0.05);
    std::vector<std::size_t> via_q;
    for (std::size_t i : order_by_pvalue(p))
      if (q.q[i] <= 0.05) via_q.push_back(i);
    CHECK(via_q == r.rejected);
  }
}

TEST_CASE("ordering is stable under ties") {
  const std::vector<double> p{0.5, 0.1, 0.5, 0.1};
  CHECK(order_by_pvalue(p) == std::vector<std::size_t>{1, 3, 0, 2});
}
