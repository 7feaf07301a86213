#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mtconf {

/// 0.05, 0.10, ..., 0.95.
std::vector<double> default_lambda_grid();

struct Pi0Estimate {
  std::vector<double> lambda_grid;
  std::vector<double> raw;  // #{p > lambda} / (G (1 - lambda))
  double extrapolated = 0.0;  // spline value at lambda = 1 before clamping
  double pi0 = 1.0;
  bool clamped = false;
};

struct QValueSet {
  std::vector<double> q;  // aligned with the input p-values
  double pi0_used = 1.0;
};

struct RejectionSet {
  std::vector<std::size_t> rejected;  // input indices, ascending by p then index
  std::size_t k_hat = 0;
  double alpha = 0.0;
};

/// Effective degrees of freedom of the smoothing spline fitted to the lambda curve.
inline constexpr double kPi0SplineDf = 3.0;

/// Storey-type pi0: raw tail-proportion estimates on `lambda_grid`, smoothed by
/// a cubic smoothing spline (df = 3) and evaluated at lambda = 1, clamped to [1/G, 1].
Pi0Estimate estimate_pi0(std::span<const double> pvalues,
                         std::span<const double> lambda_grid);
Pi0Estimate estimate_pi0(std::span<const double> pvalues);

/// Step-up q-values with fixed pi0; largest p gets pi0 * p, then
/// q_(i) = min(pi0 G p_(i) / i, q_(i+1)).
QValueSet qvalues(std::span<const double> pvalues, double pi0);

/// Benjamini-Hochberg step-up at level alpha.
RejectionSet bh_procedure(std::span<const double> pvalues, double alpha);

/// Stable ascending order of p (ties keep input order).
std::vector<std::size_t> order_by_pvalue(std::span<const double> pvalues);

}  // namespace mtconf
