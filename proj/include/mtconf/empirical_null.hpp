#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mtconf/density.hpp"
#include "mtconf/stats_core.hpp"

namespace mtconf {

struct EmpiricalNullOptions {
  int n_bins = 120;
  int poly_degree = 7;
  /// Zero-assumption window; defaults to [mode - 1, mode + 1].
  std::optional<std::pair<double, double>> window;
};

/// Empirical null N(delta0, sigma0^2) with null proportion pi0, fitted by
/// central matching. `f` is the mixture pi0 f0 + (1 - pi0) f1 on the grid;
/// `f_raw` is the unconstrained marginal estimate it was derived from.
struct EmpiricalNull {
  double delta0 = 0.0;
  double sigma0 = 1.0;
  double pi0 = 1.0;
  double pi0_central = 1.0;  // central-matching value before capping
  bool pi0_clamped = false;
  bool f1_truncated = false;  // f_raw < pi0 f0 somewhere on the grid
  std::pair<double, double> window{0.0, 0.0};
  DensityEstimate f;
  DensityEstimate f_raw;
  DensityEstimate f0;
  DensityEstimate f1;
};

/// Fits delta0 and sigma0 from a least-squares quadratic in t to log f_raw over the
/// window grid points, pi0 from the quadratic's level (capped so pi0 f0 <= f_raw at
/// the mode, and at 1), and f1 = max(0, f_raw - pi0 f0) renormalised.
EmpiricalNull fit_empirical_null(std::span<const double> stats,
                                 const EmpiricalNullOptions& options = {});

/// Local false discovery rate min(1, pi0 f0(t) / f(t)); 1 outside the grid or where f = 0.
std::vector<double> local_fdr(std::span<const double> t_values, const EmpiricalNull& null);

/// Robust scale of known-null statistics: median |U| / Phi^-1(0.75).
double null_scale_from_known_nulls(std::span<const double> known_null_stats);

struct StratumTests {
  int stratum = 0;
  TTestBatch tests;
};

/// Unpooled t-tests within each stratum of samples, strata in ascending label order.
std::vector<StratumTests> stratified_tests(const ExpressionMatrix& matrix,
                                           std::span<const int> strata);

}  // namespace mtconf
