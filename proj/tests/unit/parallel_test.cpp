#include <doctest.h>

#include <omp.h>

#include "mtconf/empirical_null.hpp"
#include "mtconf/reference.hpp"
#include "mtconf/shrinkage.hpp"
#include "mtconf/simulation.hpp"
#include "mtconf/stats_core.hpp"

using namespace mtconf;

namespace {

struct ThreadCount {
  int saved = omp_get_max_threads();
  explicit ThreadCount(int n) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
};

bool same(const CiTable& a, const CiTable& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.gene_id != y.gene_id || x.t_js != y.t_js || x.ci_low != y.ci_low || x.ci_high != y.ci_high ||
        x.effect_hat != y.effect_hat)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("t-tests match the serial reference") {
  ExpressionSimConfig c;
  c.genes = 3000;
  c.samples = 24;
  c.seed = 8;
  const auto sim = simulate_expression(c);
  const auto ref = reference::unpooled_t_tests(sim.matrix);
  for (int threads : {1, 3, 8}) {
    ThreadCount guard(threads);
    CHECK(unpooled_t_tests(sim.matrix).results == ref.results);
  }
}

TEST_CASE("simulation matches the serial reference") {
  for (auto model : {NullModel::theoretical, NullModel::shifted_scaled, NullModel::stratified}) {
    SimConfig c;
    c.g = 50000;
    c.null_model = model;
    c.theta = 0.5;
    c.seed = 12;
    const auto ref = reference::simulate(c);
    for (int threads : {1, 4, 8}) {
      ThreadCount guard(threads);
      CHECK(simulate(c) == ref);
    }
  }
}

TEST_CASE("bootstrap matches the serial reference") {
  SimConfig c;
  c.g = 1500;
  c.seed = 13;
  const auto sim = simulate(c);
  const auto null = fit_empirical_null(sim.stats);
  const auto shrink = double_shrink(sim.stats, null);
  std::vector<double> ses(sim.stats.size());
  std::vector<std::string> ids(sim.stats.size());
  for (std::size_t i = 0; i < ses.size(); ++i) {
    ses[i] = 0.5 + 0.001 * static_cast<double>(i);
    ids[i] = "g" + std::to_string(i);
  }
  BootstrapOptions opt;
  opt.replicates = 300;
  const auto ref = reference::bootstrap_cis(sim.stats, shrink, null, ses, ids, opt);
  for (int threads : {1, 2, 8}) {
    ThreadCount guard(threads);
    CHECK(same(bootstrap_cis(sim.stats, shrink, null, ses, ids, opt), ref));
  }
}

TEST_CASE("variance filter is thread-count independent") {
  ExpressionSimConfig c;
  c.genes = 2000;
  c.samples = 10;
  const auto sim = simulate_expression(c);
  ThreadCount one(1);
  const auto a = variance_filter(sim.matrix, 1.0);
  omp_set_num_threads(8);
  const auto b = variance_filter(sim.matrix, 1.0);
  CHECK(a.gene_ids() == b.gene_ids());
  CHECK(a.values() == b.values());
}
