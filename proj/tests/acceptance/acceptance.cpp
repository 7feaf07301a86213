// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mtconf/empirical_null.hpp"
#include "mtconf/fdr.hpp"
#include "mtconf/matrix_io.hpp"
#include "mtconf/normal.hpp"
#include "mtconf/rng.hpp"
#include "mtconf/sensitivity.hpp"
#include "mtconf/shrinkage.hpp"
#include "mtconf/simulation.hpp"

namespace {

using namespace mtconf;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> two_sided_p(const std::vector<double>& stats) {
  std::vector<double> p;
  p.reserve(stats.size());
  for (double t : stats) p.push_back(normal_two_sided_p(t));
  return p;
}

// Model (2.1) setup shared by criteria 1, 7 and 8.
SimConfig mixture_setup(std::uint64_t seed) {
  SimConfig c;
  c.g = 2000;
  c.pi0 = 0.9;
  c.null_model = NullModel::theoretical;
  c.alt_mean = 3.0;
  c.alt_sd = 1.0;
  c.seed = seed;
  return c;
}

Outcome bh_fdr_control() {
  double total = 0.0;
  constexpr int kReps = 200;
  for (int r = 0; r < kReps; ++r) {
    const auto d = simulate(mixture_setup(1000 + r));
    const auto rej = bh_procedure(two_sided_p(d.stats), 0.1);
    total += empirical_fdr(rej.rejected, d.truth);
  }
  const double mean_fdp = total / kReps;
  return {mean_fdp <= 0.10 + 0.02, "mean FDP " + fmt(mean_fdp) + " (limit 0.12)"};
}

Outcome qvalue_bh_equivalence() {
  const rng::Stream s(77, 1);
  std::uint64_t k = 0;
  int mismatches = 0, cases = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto len = 1 + static_cast<std::size_t>(s.uniform(k++) * 50);
    std::vector<double> p(len);
    const bool coarse = rep % 3 == 0;  // coarse grid forces ties
    for (auto& v : p) {
      const double u = s.uniform(k++);
      v = coarse ? std::round(u * 20.0) / 400.0 : u * (rep % 2 ? 1.0 : 0.2);
    }
    const auto q = qvalues(p, 1.0);
    for (double alpha : {0.01, 0.05, 0.1, 0.2}) {
      ++cases;
      auto bh = bh_procedure(p, alpha).rejected;
      std::sort(bh.begin(), bh.end());
      std::vector<std::size_t> by_q;
      for (std::size_t i = 0; i < len; ++i)
        if (q.q[i] <= alpha) by_q.push_back(i);
      if (by_q != bh) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

Outcome pi0_estimation() {
  constexpr int kSeeds = 200;
  constexpr std::size_t g = 10000;
  int null_ok = 0, mix_ok = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const rng::Stream s(5000 + seed, 2);
    std::vector<double> p(g);
    for (std::size_t i = 0; i < g; ++i) p[i] = s.uniform(i);
    const double a = estimate_pi0(p).pi0;
    null_ok += a >= 0.90 && a <= 1.0;

    const rng::Stream z(5000 + seed, 3);
    for (std::size_t i = g / 2; i < g; ++i) p[i] = normal_two_sided_p(3.0 + z.normal(i));
    const double b = estimate_pi0(p).pi0;
    mix_ok += b >= 0.40 && b <= 0.62;
  }
  const double f_null = static_cast<double>(null_ok) / kSeeds;
  const double f_mix = static_cast<double>(mix_ok) / kSeeds;
  return {f_null >= 0.95 && f_mix >= 0.90,
          "pure null in [0.90,1]: " + fmt(f_null) + " (need 0.95); pi0=0.5 in [0.40,0.62]: " +
              fmt(f_mix) + " (need 0.90)"};
}

Outcome sensitivity_identity() {
  const rng::Stream s(31, 4);
  double worst = 0.0;
  bool se_same = true, product_bitwise = true;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto b = s.block(i);
    const double beta = 10.0 * (rng::to_unit(b[0], b[1]) - 0.5);
    const double se = 0.01 + 3.0 * rng::to_unit(b[2], b[3]);
    const auto b2 = s.block(i + (1ull << 40));
    const double gamma = 4.0 * (rng::to_unit(b2[0], b2[1]) - 0.5);
    const double mu = 2.0 * (rng::to_unit(b2[2], b2[3]) - 0.5);
    const std::vector<TestResult> in{make_test_result("g", beta, se)};
    const auto out = adjust_results(in, {gamma, mu});
    const long double expect = static_cast<long double>(beta) -
                               static_cast<long double>(gamma) * static_cast<long double>(mu);
    const long double scale = std::max({1.0L, std::fabs(static_cast<long double>(beta)), std::fabs(expect)});
    worst = std::max(worst, static_cast<double>(std::fabs(out[0].beta_star - expect) / scale));
    se_same = se_same && out[0].se == se;
    // equal products: commuted factors and exact power-of-two rescaling
    const auto swapped = adjust_results(in, {mu, gamma});
    const auto rescaled = adjust_results(in, {gamma * 4.0, mu / 4.0});
    product_bitwise = product_bitwise && swapped == out && rescaled == out;
  }
  return {worst <= 1e-12 && se_same && product_bitwise,
          "max rel err " + fmt(worst, 3) + ", se invariant " + (se_same ? "yes" : "NO") +
              ", equal-product bitwise " + (product_bitwise ? "yes" : "NO")};
}

struct MixtureCheck {
  double worst_identity = 0.0;
  double worst_integral_dev = 0.0;
  int fits = 0;

  void add(const EmpiricalNull& n) {
    ++fits;
    for (std::size_t k = 0; k < n.f.grid.size(); ++k)
      worst_identity = std::max(worst_identity,
                                std::fabs(n.pi0 * n.f0.f[k] + (1.0 - n.pi0) * n.f1.f[k] - n.f.f[k]));
    for (const DensityEstimate* d : {&n.f, &n.f_raw, &n.f0, &n.f1})
      worst_integral_dev = std::max(worst_integral_dev, std::fabs(trapezoid(d->grid, d->f) - 1.0));
  }
};

Outcome empirical_null_recovery() {
  std::vector<double> d_err, s_err;
  int pure_ok = 0;
  for (int seed = 0; seed < 100; ++seed) {
    SimConfig c;
    c.g = 10000;
    c.pi0 = 0.9;
    c.null_model = NullModel::shifted_scaled;
    c.delta0 = 0.5;
    c.sigma0 = 1.2;
    c.alt_mean = 3.5;
    c.alt_sd = 1.0;
    c.seed = 7000 + seed;
    const auto fit = fit_empirical_null(simulate(c).stats);
    d_err.push_back(std::fabs(fit.delta0 - 0.5));
    s_err.push_back(std::fabs(fit.sigma0 - 1.2));

    SimConfig pure;
    pure.g = 10000;
    pure.pi0 = 1.0;
    pure.seed = 8000 + seed;
    const auto pf = fit_empirical_null(simulate(pure).stats);
    pure_ok += pf.delta0 >= -0.1 && pf.delta0 <= 0.1 && pf.sigma0 >= 0.9 && pf.sigma0 <= 1.1;
  }
  const double md = median(d_err), ms = median(s_err);
  const double frac = pure_ok / 100.0;
  return {md <= 0.15 && ms <= 0.15 && frac >= 0.90,
          "median |d0-0.5| " + fmt(md) + ", median |s0-1.2| " + fmt(ms) +
              ", pure-null fits in band " + fmt(frac) + " (need 0.90)"};
}

Outcome genomic_control() {
  bool ok = true;
  std::string detail;
  for (double sigma : {1.0, 2.0}) {
    int in_band = 0;
    for (int seed = 0; seed < 100; ++seed) {
      const rng::Stream s(9000 + seed, static_cast<std::uint64_t>(sigma));
      std::vector<double> u(1000);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = sigma * s.normal(i);
      const double ratio = null_scale_from_known_nulls(u) / sigma;
      in_band += ratio >= 0.93 && ratio <= 1.07;
    }
    ok = ok && in_band >= 90;
    detail += "sigma=" + fmt(sigma) + ": " + std::to_string(in_band) + "/100 in band; ";
  }
  const rng::Stream s(42, 42);
  std::vector<double> u(1000);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = s.normal(i);
  const double base = null_scale_from_known_nulls(u);
  bool exact = true;
  for (double c : {0.25, 0.5, 2.0, 8.0}) {
    std::vector<double> cu(u);
    for (double& v : cu) v *= c;
    exact = exact && null_scale_from_known_nulls(cu) == c * base;
  }
  ok = ok && exact;
  detail += std::string("scale equivariance exact: ") + (exact ? "yes" : "NO");
  return {ok, detail};
}

Outcome shrinkage_dominance() {
  int wins = 0;
  bool identity = true;
  for (int r = 0; r < 200; ++r) {
    const auto d = simulate(mixture_setup(1000 + r));
    const auto null = fit_empirical_null(d.stats);
    const auto js = double_shrink(d.stats, null);
    double loss_js = 0.0, loss_raw = 0.0;
    for (std::size_t i = 0; i < d.stats.size(); ++i) {
      loss_js += (js.t_js[i] - d.true_means[i]) * (js.t_js[i] - d.true_means[i]);
      loss_raw += (d.stats[i] - d.true_means[i]) * (d.stats[i] - d.true_means[i]);
      identity = identity && js.t_js[i] == js.w0[i] * js.t0_js[i] + (1.0 - js.w0[i]) * js.t1_js[i];
    }
    wins += loss_js < loss_raw;
  }
  return {wins >= 190 && identity,
          std::to_string(wins) + "/200 replicates with lower risk (need 190); convex identity exact: " +
              (identity ? "yes" : "NO")};
}

Outcome bootstrap_coverage() {
  std::size_t covered = 0, total = 0;
  for (int r = 0; r < 100; ++r) {
    const auto d = simulate(mixture_setup(3000 + r));
    const auto null = fit_empirical_null(d.stats);
    const auto js = double_shrink(d.stats, null);
    const std::vector<double> ses(d.stats.size(), 1.0);
    std::vector<std::string> ids(d.stats.size());
    const auto table = bootstrap_cis(d.stats, js, null, ses, ids, {1000, 0.95, 100u + r});
    for (std::size_t i = 0; i < d.stats.size(); ++i) {
      covered += table.rows[i].ci_low <= d.true_means[i] && d.true_means[i] <= table.rows[i].ci_high;
      ++total;
    }
  }
  const double coverage = static_cast<double>(covered) / static_cast<double>(total);
  return {coverage >= 0.90 && coverage <= 0.98, "empirical coverage " + fmt(coverage, 5) + " (band [0.90, 0.98])"};
}

Outcome stratification_correction() {
  std::vector<double> pooled_rate, strat_rate;
  for (int r = 0; r < 200; ++r) {
    ExpressionSimConfig c;
    c.genes = 500;
    c.samples = 400;
    c.pi0 = 1.0;
    c.n_strata = 2;
    c.stratum_shift = 0.5;
    c.case_prob = {0.3, 0.7};
    c.seed = 11000 + r;
    const auto sim = simulate_expression(c);
    const auto pooled = unpooled_t_tests(sim.matrix);
    std::size_t hits = 0;
    for (const auto& t : pooled.results) hits += t.p < 0.05;
    pooled_rate.push_back(static_cast<double>(hits) / pooled.results.size());

    const auto strata = stratified_tests(sim.matrix, sim.strata);
    std::size_t s_hits = 0, s_total = 0;
    for (const auto& s : strata)
      for (const auto& t : s.tests.results) {
        s_hits += t.p < 0.05;
        ++s_total;
      }
    strat_rate.push_back(static_cast<double>(s_hits) / s_total);
  }
  const double mp = median(pooled_rate), ms = median(strat_rate);
  return {mp >= 2.0 * 0.05 && std::fabs(ms - 0.05) <= 0.015,
          "median pooled rate " + fmt(mp) + " (need >= 0.10), median stratified rate " + fmt(ms) +
              " (need 0.05 +/- 0.015)"};
}

Outcome mixture_identity() {
  // the fits of criteria 5 and 7 again, plus scaled-null and left-shifted alternatives
  MixtureCheck check;
  for (int seed = 0; seed < 100; ++seed) {
    SimConfig c;
    c.g = 10000;
    c.pi0 = 0.9;
    c.null_model = NullModel::shifted_scaled;
    c.delta0 = 0.5;
    c.sigma0 = 1.2;
    c.alt_mean = 3.5;
    c.seed = 7000 + seed;
    check.add(fit_empirical_null(simulate(c).stats));
    SimConfig pure;
    pure.g = 10000;
    pure.pi0 = 1.0;
    pure.seed = 8000 + seed;
    check.add(fit_empirical_null(simulate(pure).stats));
  }
  for (int r = 0; r < 200; ++r) check.add(fit_empirical_null(simulate(mixture_setup(1000 + r)).stats));
  for (int seed = 0; seed < 20; ++seed) {
    SimConfig c;
    c.g = 5000;
    c.pi0 = 0.7 + 0.01 * seed;
    c.alt_mean = seed % 2 ? -2.5 : 4.0;
    c.alt_sd = 1.5;
    c.null_model = NullModel::scaled;
    c.sigma = 1.3;
    c.seed = 12000 + seed;
    check.add(fit_empirical_null(simulate(c).stats));
  }
  return {check.worst_identity <= 1e-9 && check.worst_integral_dev <= 0.01,
          std::to_string(check.fits) + " fits; max identity error " + fmt(check.worst_identity, 3) +
              ", max |integral - 1| " + fmt(check.worst_integral_dev, 3)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("mtconf_determinism_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  ExpressionSimConfig c;
  c.genes = 3000;
  c.samples = 50;
  c.pi0 = 0.85;
  c.effect = 1.2;
  c.seed = 2024;
  {
    std::ofstream m(dir / "matrix.csv", std::ios::binary);
    write_matrix(m, simulate_expression(c).matrix);
  }
  for (int threads : {1, 8}) {
    const std::string cmd = std::string(MTCONF_CLI) + " pipeline --input " + (dir / "matrix.csv").string() +
                            " --threads " + std::to_string(threads) + " --seed 99 --output-dir " +
                            (dir / ("t" + std::to_string(threads))).string() + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "pipeline run failed with --threads " + std::to_string(threads)};
  }
  int identical = 0, count = 0;
  std::string diff;
  for (const char* name : {"qvalues.csv", "sensitivity.csv", "empirical_null.csv", "local_fdr.csv",
                           "cis.csv", "topk.csv", "summary.json"}) {
    ++count;
    const auto a = slurp(dir / "t1" / name);
    const auto b = slurp(dir / "t8" / name);
    if (!a.empty() && a == b) ++identical;
    else diff += std::string(" ") + name;
  }
  fs::remove_all(dir);
  return {identical == count, std::to_string(identical) + "/" + std::to_string(count) +
                                  " output files bitwise identical (threads 1 vs 8)" + diff};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit_s;  // 0 = none stated
};

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select criteria by number
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  const std::vector<Criterion> criteria{
      {1, "BH FDR control", bh_fdr_control, 60.0},
      {2, "q-value/BH equivalence", qvalue_bh_equivalence, 10.0},
      {3, "pi0 estimation", pi0_estimation, 0.0},
      {4, "sensitivity identity", sensitivity_identity, 0.0},
      {5, "empirical-null recovery", empirical_null_recovery, 0.0},
      {6, "genomic-control scale", genomic_control, 0.0},
      {7, "shrinkage dominance", shrinkage_dominance, 0.0},
      {8, "bootstrap CI coverage", bootstrap_coverage, 300.0},
      {9, "stratification correction", stratification_correction, 0.0},
      {10, "mixture identity & density quality", mixture_identity, 0.0},
      {11, "determinism across thread counts", determinism, 0.0},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += "; runtime " + fmt(secs) + "s exceeds " + fmt(c.time_limit_s) + "s";
    }
    failed += !o.pass;
    std::printf("[%s] %2d %-36s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
