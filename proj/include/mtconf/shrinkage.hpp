#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mtconf/empirical_null.hpp"
#include "mtconf/fdr.hpp"

namespace mtconf {

/// Double James-Stein shrinkage of the statistics toward the fitted null and
/// alternative component means, mixed by the posterior null weight w0(T_i).
struct ShrinkageResult {
  std::vector<double> t_js;
  std::vector<double> w0;
  std::vector<double> t0_js;
  std::vector<double> t1_js;
  double mu0_hat = 0.0;
  double mu1_hat = 0.0;
  double shrink_factor0 = 1.0;
  double shrink_factor1 = 1.0;
};

/// Posterior null weight pi0 f0(t) / (pi0 f0(t) + (1 - pi0) f1(t)) from the
/// gridded densities; falls back to pi0 where both densities vanish.
double null_weight(double t, const EmpiricalNull& null);

/// Positive-part James-Stein factor min(1, (G - 2) / sum (T_i - centre)^2); 1 when the sum is 0.
double james_stein_factor(std::span<const double> stats, double centre);

ShrinkageResult double_shrink(std::span<const double> stats, const EmpiricalNull& null);

struct CiRow {
  std::string gene_id;
  double t_stat = 0.0;
  double t_js = 0.0;
  double effect_hat = 0.0;  // t_js * se
  double ci_low = 0.0;
  double ci_high = 0.0;
  double q = std::numeric_limits<double>::quiet_NaN();  // filled by top_k_report
  bool excludes_estimate = false;  // effect_hat falls outside [ci_low, ci_high]
};

struct CiTable {
  std::vector<CiRow> rows;
  double level = 0.95;
};

struct BootstrapOptions {
  int replicates = 1000;
  double level = 0.95;
  std::uint64_t seed = 20070101;
};

/// Draws `n` values from the gridded density by inverse-CDF sampling on the
/// trapezoid cumulative; used for the bootstrap mean draws.
class GridSampler {
 public:
  explicit GridSampler(const DensityEstimate& density);
  double operator()(double u) const;

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// Per-replicate empirical variance of G draws from the fitted mixture.
std::vector<double> bootstrap_mean_variances(const EmpiricalNull& null, std::size_t g,
                                             int replicates, std::uint64_t seed);

/// Equal-tail bootstrap intervals: replicate b draws T*_ib ~ N(t_js_i, 1 + s2_b)
/// where s2_b is the variance of replicate b's mixture draws. Endpoints are
/// order-statistic quantiles, then scaled by ses_i to the effect scale.
CiTable bootstrap_cis(std::span<const double> stats, const ShrinkageResult& shrink,
                      const EmpiricalNull& null, std::span<const double> ses,
                      std::span<const std::string> gene_ids, const BootstrapOptions& options);

/// Order-statistic (type 1) quantile position for probability p in a sample of size n.
std::size_t type1_quantile_index(std::size_t n, double p);

/// The k rows with smallest q (ties: larger |t| first, then input order), sorted by q.
CiTable top_k_report(const CiTable& table, const QValueSet& qvals, std::size_t k);

}  // namespace mtconf
