#include "mtconf/reference.hpp"

#include <algorithm>
#include <cmath>

#include "mtconf/error.hpp"
#include "mtconf/rng.hpp"

namespace mtconf::reference {

TTestBatch unpooled_t_tests(const ExpressionMatrix& matrix) {
  TTestBatch out;
  const auto& labels = matrix.labels();
  for (std::size_t g = 0; g < matrix.genes(); ++g) {
    std::vector<double> groups[2];
    const auto row = matrix.row(g);
    for (std::size_t j = 0; j < row.size(); ++j) groups[labels[j]].push_back(row[j]);
    double mean[2], var[2];
    for (int k = 0; k < 2; ++k) {
      double s = 0.0;
      for (double v : groups[k]) s += v;
      mean[k] = s / static_cast<double>(groups[k].size());
      double ss = 0.0;
      for (double v : groups[k]) ss += (v - mean[k]) * (v - mean[k]);
      var[k] = ss / static_cast<double>(groups[k].size() - 1);
    }
    const double se = std::sqrt(var[1] / static_cast<double>(groups[1].size()) +
                                var[0] / static_cast<double>(groups[0].size()));
    if (!(se > 0.0)) {
      out.failures.push_back({g, matrix.gene_ids()[g], "zero standard error (both classes constant)"});
      continue;
    }
    out.results.push_back(make_test_result(matrix.gene_ids()[g], mean[1] - mean[0], se));
  }
  return out;
}

SimulatedData simulate(const SimConfig& config) {
  config.validate();
  const rng::Stream status(config.seed, rng::stream_id(rng::kTagHypothesisStatus, 0));
  const rng::Stream noise(config.seed, rng::stream_id(rng::kTagStatistic, 0));
  const rng::Stream strata(config.seed, rng::stream_id(rng::kTagStratum, 0));
  SimulatedData out;
  for (std::size_t i = 0; i < config.g; ++i) {
    const bool is_alt = status.uniform(i) < 1.0 - config.pi0;
    int stratum = 0;
    if (config.null_model == NullModel::stratified)
      stratum = std::min(config.n_strata - 1, static_cast<int>(strata.uniform(i) * config.n_strata));
    double mean = 0.0, sd = 1.0;
    if (is_alt) {
      mean = config.alt_mean;
      sd = config.alt_sd;
    } else if (config.null_model == NullModel::scaled) {
      sd = config.sigma;
    } else if (config.null_model == NullModel::shifted) {
      mean = config.theta;
    } else if (config.null_model == NullModel::shifted_scaled) {
      mean = config.delta0;
      sd = config.sigma0;
    } else if (config.null_model == NullModel::stratified) {
      mean = stratum * config.theta;
    }
    out.truth.push_back(is_alt);
    out.strata.push_back(stratum);
    out.true_means.push_back(mean);
    out.stats.push_back(mean + sd * noise.normal(i));
  }
  return out;
}

CiTable bootstrap_cis(std::span<const double> stats, const ShrinkageResult& shrink,
                      const EmpiricalNull& null, std::span<const double> ses,
                      std::span<const std::string> gene_ids, const BootstrapOptions& options) {
  const std::size_t g = stats.size();
  const auto b_count = static_cast<std::size_t>(options.replicates);
  if (options.replicates < 100) throw InvalidArgument("bootstrap_cis: need at least 100 replicates");
  const GridSampler sampler(null.f);

  // replicates[i][b]
  std::vector<std::vector<double>> reps(g, std::vector<double>(b_count));
  std::vector<double> mu(g);
  for (std::size_t b = 0; b < b_count; ++b) {
    const rng::Stream mean_stream(options.seed, rng::stream_id(rng::kTagBootstrapMean, b));
    for (std::size_t i = 0; i < g; ++i) mu[i] = sampler(mean_stream.uniform(i));
    const double scale = std::sqrt(1.0 + sample_variance(mu));
    for (std::size_t i = 0; i < g; ++i) {
      const rng::Stream stat_stream(options.seed, rng::stream_id(rng::kTagBootstrapStat, i));
      reps[i][b] = shrink.t_js[i] + scale * stat_stream.normal(b);
    }
  }

  const std::size_t lo_idx = type1_quantile_index(b_count, 0.5 * (1.0 - options.level));
  const std::size_t hi_idx = type1_quantile_index(b_count, 0.5 * (1.0 + options.level));
  CiTable table;
  table.level = options.level;
  for (std::size_t i = 0; i < g; ++i) {
    std::sort(reps[i].begin(), reps[i].end());
    CiRow row;
    row.gene_id = gene_ids[i];
    row.t_stat = stats[i];
    row.t_js = shrink.t_js[i];
    row.effect_hat = shrink.t_js[i] * ses[i];
    row.ci_low = reps[i][lo_idx] * ses[i];
    row.ci_high = reps[i][hi_idx] * ses[i];
    row.excludes_estimate = row.effect_hat < row.ci_low || row.effect_hat > row.ci_high;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace mtconf::reference
