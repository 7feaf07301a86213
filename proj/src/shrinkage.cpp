#include "mtconf/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtconf/error.hpp"
#include "mtconf/rng.hpp"
#include "mtconf/stats_core.hpp"

namespace mtconf {

double null_weight(double t, const EmpiricalNull& null) {
  const double num = null.pi0 * null.f0.at(t);
  const double den = num + (1.0 - null.pi0) * null.f1.at(t);
  if (!(den > 0.0)) return null.pi0;
  return std::clamp(num / den, 0.0, 1.0);
}

double james_stein_factor(std::span<const double> stats, double centre) {
  double ss = 0.0;
  for (double t : stats) ss += (t - centre) * (t - centre);
  if (!(ss > 0.0)) return 1.0;
  return std::min(1.0, static_cast<double>(stats.size() - 2) / ss);
}

namespace {

double component_mean(const DensityEstimate& d) {
  std::vector<double> tf(d.grid.size());
  for (std::size_t k = 0; k < tf.size(); ++k) tf[k] = d.grid[k] * d.f[k];
  return trapezoid(d.grid, tf) / trapezoid(d.grid, d.f);
}

}  // namespace

ShrinkageResult double_shrink(std::span<const double> stats, const EmpiricalNull& null) {
  if (stats.size() < 3) throw InvalidArgument("double_shrink: need at least 3 statistics");
  ShrinkageResult out;
  out.mu0_hat = component_mean(null.f0);
  out.mu1_hat = component_mean(null.f1);
  out.shrink_factor0 = james_stein_factor(stats, out.mu0_hat);
  out.shrink_factor1 = james_stein_factor(stats, out.mu1_hat);

  const std::size_t g = stats.size();
  out.t_js.resize(g);
  out.w0.resize(g);
  out.t0_js.resize(g);
  out.t1_js.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    const double t = stats[i];
    out.t0_js[i] = t - out.shrink_factor0 * (t - out.mu0_hat);
    out.t1_js[i] = t - out.shrink_factor1 * (t - out.mu1_hat);
    out.w0[i] = null_weight(t, null);
    out.t_js[i] = out.w0[i] * out.t0_js[i] + (1.0 - out.w0[i]) * out.t1_js[i];
  }
  return out;
}

GridSampler::GridSampler(const DensityEstimate& density) : grid_(density.grid) {
  cdf_.assign(grid_.size(), 0.0);
  for (std::size_t k = 1; k < grid_.size(); ++k)
    cdf_[k] = cdf_[k - 1] + 0.5 * (grid_[k] - grid_[k - 1]) * (density.f[k] + density.f[k - 1]);
  const double total = cdf_.back();
  if (!(total > 0.0)) throw InvalidArgument("GridSampler: density has no mass");
  for (double& c : cdf_) c /= total;
}

double GridSampler::operator()(double u) const {
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return grid_.front();
  if (it == cdf_.end()) return grid_.back();
  const auto k = static_cast<std::size_t>(it - cdf_.begin());
  const double w = (u - cdf_[k - 1]) / (cdf_[k] - cdf_[k - 1]);
  return grid_[k - 1] + w * (grid_[k] - grid_[k - 1]);
}

std::vector<double> bootstrap_mean_variances(const EmpiricalNull& null, std::size_t g,
                                             int replicates, std::uint64_t seed) {
  const GridSampler sampler(null.f);
  std::vector<double> var(static_cast<std::size_t>(replicates));
#pragma omp parallel
  {
    std::vector<double> draws(g);
#pragma omp for schedule(static)
    for (int b = 0; b < replicates; ++b) {
      const rng::Stream stream(seed, rng::stream_id(rng::kTagBootstrapMean, static_cast<std::uint64_t>(b)));
      for (std::size_t i = 0; i < g; ++i) draws[i] = sampler(stream.uniform(i));
      var[static_cast<std::size_t>(b)] = sample_variance(draws);
    }
  }
  return var;
}

std::size_t type1_quantile_index(std::size_t n, double p) {
  const double pos = std::ceil(static_cast<double>(n) * p - 1e-9);
  const auto k = static_cast<std::ptrdiff_t>(pos) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

CiTable bootstrap_cis(std::span<const double> stats, const ShrinkageResult& shrink,
                      const EmpiricalNull& null, std::span<const double> ses,
                      std::span<const std::string> gene_ids, const BootstrapOptions& options) {
  const std::size_t g = stats.size();
  if (options.replicates < 100) throw InvalidArgument("bootstrap_cis: need at least 100 replicates");
  if (!(options.level > 0.5 && options.level < 1.0))
    throw InvalidArgument("bootstrap_cis: level must lie in (0.5, 1)");
  if (ses.size() != g || gene_ids.size() != g || shrink.t_js.size() != g)
    throw InvalidArgument("bootstrap_cis: statistics, standard errors, ids and shrinkage must align");
  for (double s : ses)
    if (!(s > 0.0)) throw InvalidArgument("bootstrap_cis: standard errors must be positive");

  const auto b_count = static_cast<std::size_t>(options.replicates);
  const auto variances = bootstrap_mean_variances(null, g, options.replicates, options.seed);
  std::vector<double> scale(b_count);
  for (std::size_t b = 0; b < b_count; ++b) scale[b] = std::sqrt(1.0 + variances[b]);

  const std::size_t lo_idx = type1_quantile_index(b_count, 0.5 * (1.0 - options.level));
  const std::size_t hi_idx = type1_quantile_index(b_count, 0.5 * (1.0 + options.level));

  CiTable table;
  table.level = options.level;
  table.rows.resize(g);
#pragma omp parallel
  {
    std::vector<double> draws(b_count);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(g); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const rng::Stream stream(options.seed, rng::stream_id(rng::kTagBootstrapStat, i));
      for (std::size_t b = 0; b < b_count; ++b)
        draws[b] = shrink.t_js[i] + scale[b] * stream.normal(b);
      std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(lo_idx), draws.end());
      const double lo = draws[lo_idx];
      std::nth_element(draws.begin() + static_cast<std::ptrdiff_t>(lo_idx), draws.begin() + static_cast<std::ptrdiff_t>(hi_idx), draws.end());
      const double hi = draws[hi_idx];

      CiRow& row = table.rows[i];
      row.gene_id = gene_ids[i];
      row.t_stat = stats[i];
      row.t_js = shrink.t_js[i];
      row.effect_hat = shrink.t_js[i] * ses[i];
      row.ci_low = lo * ses[i];
      row.ci_high = hi * ses[i];
      row.excludes_estimate = row.effect_hat < row.ci_low || row.effect_hat > row.ci_high;
    }
  }
  return table;
}

CiTable top_k_report(const CiTable& table, const QValueSet& qvals, std::size_t k) {
  const std::size_t g = table.rows.size();
  if (qvals.q.size() != g) throw InvalidArgument("top_k_report: q-values do not align with the table");
  if (k > g) throw InvalidArgument("top_k_report: k exceeds the number of hypotheses");
  std::vector<std::size_t> idx(g);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (qvals.q[a] != qvals.q[b]) return qvals.q[a] < qvals.q[b];
    return std::fabs(table.rows[a].t_stat) > std::fabs(table.rows[b].t_stat);
  });
  CiTable out;
  out.level = table.level;
  for (std::size_t r = 0; r < k; ++r) {
    out.rows.push_back(table.rows[idx[r]]);
    out.rows.back().q = qvals.q[idx[r]];
  }
  return out;
}

}  // namespace mtconf
