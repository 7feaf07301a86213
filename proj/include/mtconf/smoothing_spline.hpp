#pragma once

#include <span>
#include <vector>

namespace mtconf {

/// Natural cubic smoothing spline minimizing
///   sum_i (y_i - g(x_i))^2 + penalty * integral g''(x)^2 dx
/// via the Reinsch value/second-derivative form. Beyond the outer knots the
/// spline continues linearly (zero second derivative).
class SmoothingSpline {
 public:
  /// Fit with an explicit roughness penalty (>= 0). Knots must be strictly increasing, n >= 3.
  static SmoothingSpline fit(std::span<const double> x, std::span<const double> y, double penalty);

  /// Fit with the penalty chosen so the trace of the smoother matrix equals `df`,
  /// 2 < df <= n. Bisection on log(penalty).
  static SmoothingSpline fit_df(std::span<const double> x, std::span<const double> y, double df);

  double operator()(double t) const;

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& fitted() const noexcept { return g_; }
  const std::vector<double>& second_derivatives() const noexcept { return gamma_; }
  double penalty() const noexcept { return penalty_; }
  double effective_df() const noexcept { return df_; }

 private:
  std::vector<double> x_;
  std::vector<double> g_;
  std::vector<double> gamma_;  // full length n, zero at both ends
  double penalty_ = 0.0;
  double df_ = 0.0;
};

}  // namespace mtconf
