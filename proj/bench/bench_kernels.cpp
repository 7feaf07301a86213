// Serial reference vs OpenMP kernels.
//   ./bench_kernels --benchmark_filter=TTest
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "mtconf/empirical_null.hpp"
#include "mtconf/reference.hpp"
#include "mtconf/shrinkage.hpp"
#include "mtconf/simulation.hpp"

namespace {

using namespace mtconf;

const SimulatedExpression& expression() {
  static const SimulatedExpression data = [] {
    ExpressionSimConfig c;
    c.genes = 10000;
    c.samples = 100;
    c.seed = 3;
    return simulate_expression(c);
  }();
  return data;
}

void BM_TTestSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::unpooled_t_tests(expression().matrix));
}
void BM_TTestParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(unpooled_t_tests(expression().matrix));
}
BENCHMARK(BM_TTestSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TTestParallel)->Unit(benchmark::kMillisecond);

SimConfig sim_config() {
  SimConfig c;
  c.g = 200000;
  c.pi0 = 0.9;
  c.seed = 5;
  return c;
}

void BM_SimulateSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::simulate(sim_config()));
}
void BM_SimulateParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sim_config()));
}
BENCHMARK(BM_SimulateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Unit(benchmark::kMillisecond);

struct BootstrapInput {
  SimulatedData data;
  EmpiricalNull null;
  ShrinkageResult shrink;
  std::vector<double> ses;
  std::vector<std::string> ids;
};

const BootstrapInput& bootstrap_input() {
  static const BootstrapInput in = [] {
    SimConfig c;
    c.g = 2000;
    c.seed = 11;
    BootstrapInput b;
    b.data = simulate(c);
    b.null = fit_empirical_null(b.data.stats);
    b.shrink = double_shrink(b.data.stats, b.null);
    b.ses.assign(c.g, 1.0);
    for (std::size_t i = 0; i < c.g; ++i) b.ids.push_back("h" + std::to_string(i));
    return b;
  }();
  return in;
}

void BM_BootstrapSerial(benchmark::State& state) {
  const auto& in = bootstrap_input();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::bootstrap_cis(in.data.stats, in.shrink, in.null, in.ses, in.ids, {1000, 0.95, 7}));
}
void BM_BootstrapParallel(benchmark::State& state) {
  const auto& in = bootstrap_input();
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_cis(in.data.stats, in.shrink, in.null, in.ses, in.ids, {1000, 0.95, 7}));
}
BENCHMARK(BM_BootstrapSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
