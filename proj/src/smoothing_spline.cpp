#include "mtconf/smoothing_spline.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mtconf/error.hpp"

namespace mtconf {

namespace {

struct Penalty {
  Eigen::MatrixXd q;    // n x (n-2)
  Eigen::MatrixXd r;    // (n-2) x (n-2)
  Eigen::MatrixXd qtq;  // Q^T Q
};

Penalty build_penalty(std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Penalty p;
  p.q = Eigen::MatrixXd::Zero(n, n - 2);
  p.r = Eigen::MatrixXd::Zero(n - 2, n - 2);
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    const double h0 = x[j] - x[j - 1];
    const double h1 = x[j + 1] - x[j];
    const Eigen::Index c = j - 1;
    p.q(j - 1, c) = 1.0 / h0;
    p.q(j, c) = -1.0 / h0 - 1.0 / h1;
    p.q(j + 1, c) = 1.0 / h1;
    p.r(c, c) = (h0 + h1) / 3.0;
    if (c + 1 < n - 2) {
      p.r(c, c + 1) = h1 / 6.0;
      p.r(c + 1, c) = h1 / 6.0;
    }
  }
  p.qtq = p.q.transpose() * p.q;
  return p;
}

// Reinsch form: (R + penalty Q^T Q) gamma = Q^T y, fitted = y - penalty Q gamma
Eigen::LDLT<Eigen::MatrixXd> reinsch(const Penalty& p, double penalty) {
  return Eigen::MatrixXd(p.r + penalty * p.qtq).ldlt();
}

double trace_of_smoother(const Penalty& p, double penalty) {
  const auto m = p.qtq.rows();
  return static_cast<double>(m + 2) - penalty * reinsch(p, penalty).solve(p.qtq).trace();
}

void validate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("smoothing spline: x and y lengths differ");
  if (x.size() < 3) throw InvalidArgument("smoothing spline: need at least 3 knots");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw InvalidArgument("smoothing spline: knots must be strictly increasing");
}

}  // namespace

SmoothingSpline SmoothingSpline::fit(std::span<const double> x, std::span<const double> y,
                                     double penalty) {
  validate(x, y);
  if (!(penalty >= 0.0)) throw InvalidArgument("smoothing spline: penalty must be >= 0");
  const Penalty pen = build_penalty(x);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::VectorXd gamma_inner = reinsch(pen, penalty).solve(pen.q.transpose() * yv);
  const Eigen::VectorXd g = yv - penalty * (pen.q * gamma_inner);

  SmoothingSpline out;
  out.x_.assign(x.begin(), x.end());
  out.g_.assign(g.data(), g.data() + g.size());
  out.gamma_.assign(x.size(), 0.0);
  for (Eigen::Index j = 0; j < gamma_inner.size(); ++j) out.gamma_[j + 1] = gamma_inner[j];
  out.penalty_ = penalty;
  out.df_ = trace_of_smoother(pen, penalty);
  return out;
}

SmoothingSpline SmoothingSpline::fit_df(std::span<const double> x, std::span<const double> y,
                                        double df) {
  validate(x, y);
  const auto n = static_cast<double>(x.size());
  if (!(df > 2.0 && df <= n))
    throw InvalidArgument("smoothing spline: df must lie in (2, number of knots]");
  if (df == n) return fit(x, y, 0.0);

  const Penalty pen = build_penalty(x);
  // trace of the smoother decreases monotonically in the penalty
  double lo = -30.0, hi = 30.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tr = trace_of_smoother(pen, std::exp(mid));
    if (tr > df) lo = mid; else hi = mid;
    if (hi - lo < 1e-12) break;
  }
  return fit(x, y, std::exp(0.5 * (lo + hi)));
}

double SmoothingSpline::operator()(double t) const {
  const std::size_t n = x_.size();
  if (t <= x_.front()) {
    const double h = x_[1] - x_[0];
    const double slope = (g_[1] - g_[0]) / h - h / 6.0 * (2.0 * gamma_[0] + gamma_[1]);
    return g_[0] + slope * (t - x_[0]);
  }
  if (t >= x_.back()) {
    const double h = x_[n - 1] - x_[n - 2];
    const double slope = (g_[n - 1] - g_[n - 2]) / h + h / 6.0 * (gamma_[n - 2] + 2.0 * gamma_[n - 1]);
    return g_[n - 1] + slope * (t - x_[n - 1]);
  }
  std::size_t i = 0;
  while (!(t <= x_[i + 1])) ++i;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * g_[i] + b * g_[i + 1] +
         ((a * a * a - a) * gamma_[i] + (b * b * b - b) * gamma_[i + 1]) * h * h / 6.0;
}

}  // namespace mtconf
