#include "mtconf/density.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtconf/error.hpp"

namespace mtconf {

double DensityEstimate::at(double t) const {
  if (!contains(t)) return 0.0;
  const auto hi = std::upper_bound(grid.begin(), grid.end(), t);
  if (hi == grid.end()) return f.back();
  const auto k = static_cast<std::size_t>(hi - grid.begin());
  const double w = (t - grid[k - 1]) / (grid[k] - grid[k - 1]);
  return (1.0 - w) * f[k - 1] + w * f[k];
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

namespace {

// Legendre polynomials P_0..P_degree at u in [-1, 1].
Eigen::MatrixXd legendre_basis(const std::vector<double>& u, int degree) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(u.size()), degree + 1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = 1.0;
    if (degree >= 1) x(r, 1) = u[i];
    for (int k = 2; k <= degree; ++k)
      x(r, k) = ((2.0 * k - 1.0) * u[i] * x(r, k - 1) - (k - 1.0) * x(r, k - 2)) / k;
  }
  return x;
}

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) d += y[i] * std::log(y[i] / mu[i]);
    d -= y[i] - mu[i];
  }
  return 2.0 * d;
}

}  // namespace

DensityEstimate estimate_marginal_density(std::span<const double> stats, int n_bins,
                                          int poly_degree) {
  if (stats.size() < 100) throw InvalidArgument("estimate_marginal_density: need at least 100 statistics");
  if (n_bins < 20) throw InvalidArgument("estimate_marginal_density: n_bins must be >= 20");
  if (poly_degree < 2 || poly_degree > 10)
    throw InvalidArgument("estimate_marginal_density: poly_degree must lie in [2, 10]");
  for (double s : stats)
    if (!std::isfinite(s)) throw InvalidArgument("estimate_marginal_density: non-finite statistic");

  const auto [min_it, max_it] = std::minmax_element(stats.begin(), stats.end());
  const double range = *max_it - *min_it;
  if (!(range > 0.0)) throw InvalidArgument("estimate_marginal_density: all statistics are identical");
  const double lo = *min_it - 0.1 * range;
  const double hi = *max_it + 0.1 * range;
  const double width = (hi - lo) / n_bins;

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_bins);
  for (double s : stats) {
    auto k = static_cast<int>(std::floor((s - lo) / width));
    counts[std::clamp(k, 0, n_bins - 1)] += 1.0;
  }

  DensityEstimate out;
  out.bin_width = width;
  std::vector<double> u(static_cast<std::size_t>(n_bins));
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < n_bins; ++k) {
    out.grid.push_back(lo + (k + 0.5) * width);
    u[static_cast<std::size_t>(k)] = (out.grid.back() - centre) / half;
  }
  const Eigen::MatrixXd x = legendre_basis(u, poly_degree);

  Eigen::VectorXd eta = (counts.array() + 1.0).log().matrix();
  Eigen::VectorXd mu = eta.array().exp().matrix();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(poly_degree + 1);
  double deviance = poisson_deviance(counts, mu);
  bool converged = false;
  constexpr int kMaxIter = 100;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Eigen::VectorXd z = eta + ((counts - mu).array() / mu.array()).matrix();
    const Eigen::MatrixXd xtw = x.transpose() * mu.asDiagonal();
    const Eigen::VectorXd next = (xtw * x).ldlt().solve(xtw * z);
    Eigen::VectorXd step = next - beta;
    double new_dev = 0.0;
    Eigen::VectorXd new_eta, new_mu;
    for (int half_step = 0; half_step < 30; ++half_step) {
      new_eta = x * (beta + step);
      new_mu = new_eta.array().exp().matrix();
      new_dev = poisson_deviance(counts, new_mu);
      if (std::isfinite(new_dev) && (iter == 0 || new_dev <= deviance * (1.0 + 1e-12) + 1e-12)) break;
      step *= 0.5;
    }
    beta += step;
    eta = new_eta;
    mu = new_mu;
    const double change = std::fabs(new_dev - deviance);
    deviance = new_dev;
    if (iter > 0 && change <= 1e-10 * (std::fabs(deviance) + 0.1)) {
      converged = true;
      break;
    }
  }
  if (!converged || !std::isfinite(deviance)) {
    std::ostringstream msg;
    msg << "estimate_marginal_density: IRLS did not converge in " << kMaxIter
        << " iterations (last deviance " << deviance << ")";
    throw NumericalError(msg.str());
  }

  const double g = static_cast<double>(stats.size());
  out.f.resize(static_cast<std::size_t>(n_bins));
  for (int k = 0; k < n_bins; ++k) out.f[static_cast<std::size_t>(k)] = mu[k] / (g * width);
  const double mass = trapezoid(out.grid, out.f);
  for (double& v : out.f) v /= mass;
  return out;
}

}  // namespace mtconf
