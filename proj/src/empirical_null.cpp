#include "mtconf/empirical_null.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "mtconf/error.hpp"
#include "mtconf/normal.hpp"

namespace mtconf {

EmpiricalNull fit_empirical_null(std::span<const double> stats, const EmpiricalNullOptions& options) {
  EmpiricalNull out;
  out.f_raw = estimate_marginal_density(stats, options.n_bins, options.poly_degree);
  const auto& grid = out.f_raw.grid;
  const auto& fr = out.f_raw.f;

  const auto mode_idx =
      static_cast<std::size_t>(std::max_element(fr.begin(), fr.end()) - fr.begin());
  const double mode = grid[mode_idx];
  out.window = options.window.value_or(std::make_pair(mode - 1.0, mode + 1.0));
  const auto [lo, hi] = out.window;
  if (!(lo < hi)) throw InvalidArgument("fit_empirical_null: window must satisfy low < high");

  const auto inside = std::count_if(stats.begin(), stats.end(),
                                    [&](double s) { return s >= lo && s <= hi; });
  if (static_cast<double>(inside) < 0.1 * static_cast<double>(stats.size()))
    throw InvalidArgument("fit_empirical_null: window does not contain a density peak "
                          "(fewer than 10% of statistics inside)");
  if (!(mode > lo && mode < hi))
    throw InvalidArgument("fit_empirical_null: window does not contain a density peak "
                          "(marginal mode lies outside)");

  std::vector<std::size_t> pts;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid[k] >= lo && grid[k] <= hi && fr[k] > 0.0) pts.push_back(k);
  if (pts.size() < 3)
    throw InvalidArgument("fit_empirical_null: window covers fewer than 3 grid points");

  // log f ~ a + b s + c s^2 with s = t - mode
  Eigen::MatrixXd design(static_cast<Eigen::Index>(pts.size()), 3);
  Eigen::VectorXd target(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t r = 0; r < pts.size(); ++r) {
    const double s = grid[pts[r]] - mode;
    const auto row = static_cast<Eigen::Index>(r);
    design(row, 0) = 1.0;
    design(row, 1) = s;
    design(row, 2) = s * s;
    target[row] = std::log(fr[pts[r]]);
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(target);
  if (!(coef[2] < 0.0))
    throw NumericalError("fit_empirical_null: window does not contain a density peak "
                         "(fitted log-density is not concave)");

  const double var0 = -0.5 / coef[2];
  out.sigma0 = std::sqrt(var0);
  const double offset = coef[1] * var0;
  out.delta0 = mode + offset;
  out.pi0_central = std::exp(coef[0] + 0.5 * offset * offset / var0 +
                             std::log(std::sqrt(2.0 * M_PI) * out.sigma0));

  const double at_mode = fr[mode_idx] / normal_pdf(mode, out.delta0, out.sigma0);
  out.pi0 = std::min({1.0, out.pi0_central, at_mode});
  out.pi0_clamped = out.pi0 != out.pi0_central;

  out.f0.grid = grid;
  out.f0.bin_width = out.f_raw.bin_width;
  out.f0.f.reserve(grid.size());
  for (double t : grid) out.f0.f.push_back(normal_pdf(t, out.delta0, out.sigma0));

  std::vector<double> residual(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = fr[k] - out.pi0 * out.f0.f[k];
    out.f1_truncated = out.f1_truncated || r < 0.0;
    residual[k] = std::max(0.0, r);
  }
  const double mass = trapezoid(grid, residual);
  out.f1.grid = grid;
  out.f1.bin_width = out.f_raw.bin_width;
  if (mass > 0.0) {
    out.f1.f = residual;
    for (double& v : out.f1.f) v /= mass;
  } else {
    out.f1.f = out.f0.f;
  }

  out.f.grid = grid;
  out.f.bin_width = out.f_raw.bin_width;
  out.f.f.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    out.f.f[k] = out.pi0 * out.f0.f[k] + (1.0 - out.pi0) * out.f1.f[k];
  return out;
}

std::vector<double> local_fdr(std::span<const double> t_values, const EmpiricalNull& null) {
  std::vector<double> out;
  out.reserve(t_values.size());
  for (double t : t_values) {
    if (!null.f.contains(t)) {
      out.push_back(1.0);
      continue;
    }
    const double f = null.f.at(t);
    if (!(f > 0.0)) {
      out.push_back(1.0);
      continue;
    }
    out.push_back(std::clamp(null.pi0 * null.f0.at(t) / f, 0.0, 1.0));
  }
  return out;
}

double null_scale_from_known_nulls(std::span<const double> known_null_stats) {
  if (known_null_stats.size() < 20)
    throw InvalidArgument("null_scale_from_known_nulls: need at least 20 known-null statistics");
  std::vector<double> a;
  a.reserve(known_null_stats.size());
  for (double u : known_null_stats) {
    if (!std::isfinite(u)) throw InvalidArgument("null_scale_from_known_nulls: non-finite statistic");
    a.push_back(std::fabs(u));
  }
  std::sort(a.begin(), a.end());
  const std::size_t n = a.size();
  const double median = n % 2 == 1 ? a[n / 2] : 0.5 * (a[n / 2 - 1] + a[n / 2]);
  static const double kQuartile = normal_quantile(0.75);
  const double scale = median / kQuartile;
  if (!(scale > 0.0))
    throw InvalidArgument("null_scale_from_known_nulls: degenerate statistics (median |U| is 0)");
  return scale;
}

std::vector<StratumTests> stratified_tests(const ExpressionMatrix& matrix,
                                           std::span<const int> strata) {
  if (strata.size() != matrix.samples())
    throw InvalidArgument("stratified_tests: need one stratum label per sample");
  std::map<int, std::vector<std::size_t>> columns;
  for (std::size_t c = 0; c < strata.size(); ++c) columns[strata[c]].push_back(c);

  std::vector<StratumTests> out;
  for (const auto& [stratum, cols] : columns) {
    std::size_t n1 = 0;
    for (std::size_t c : cols) n1 += static_cast<std::size_t>(matrix.labels()[c]);
    const std::size_t n0 = cols.size() - n1;
    if (n0 < 2 || n1 < 2)
      throw InvalidArgument("stratified_tests: stratum " + std::to_string(stratum) +
                            " needs at least 2 samples of each phenotype (has " +
                            std::to_string(n0) + " and " + std::to_string(n1) + ")");
    out.push_back({stratum, unpooled_t_tests(matrix.select_samples(cols))});
  }
  return out;
}

}  // namespace mtconf
