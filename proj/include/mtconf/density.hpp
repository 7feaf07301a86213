#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mtconf {

/// A density tabulated on an equally spaced grid.
struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> f;
  double bin_width = 0.0;

  /// Linear interpolation; 0 outside [grid.front(), grid.back()].
  double at(double t) const;
  bool contains(double t) const { return !grid.empty() && t >= grid.front() && t <= grid.back(); }
};

double trapezoid(std::span<const double> x, std::span<const double> y);

/// Lindsey's method: histogram the statistics into `n_bins` equal bins over
/// [min - 0.1 range, max + 0.1 range], fit a Poisson log-linear model with a
/// polynomial of degree `poly_degree` in the bin midpoints by IRLS, and
/// normalise the fitted curve to unit trapezoid integral over the midpoints.
DensityEstimate estimate_marginal_density(std::span<const double> stats, int n_bins = 120,
                                          int poly_degree = 7);

}  // namespace mtconf
