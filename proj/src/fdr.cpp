#include "mtconf/fdr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtconf/error.hpp"
#include "mtconf/smoothing_spline.hpp"

namespace mtconf {

namespace {

void check_pvalues(std::span<const double> p, const char* who) {
  if (p.empty()) throw InvalidArgument(std::string(who) + ": no p-values");
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidArgument(std::string(who) + ": p-value outside [0, 1]");
}

// G p_(k) / k, with the k = G case reduced to p_(G) exactly. Shared by the
// q-value recursion and BH so that {q <= alpha} and the BH set agree bitwise.
double step_up_ratio(std::size_t g, double p, std::size_t k) {
  return k == g ? p : static_cast<double>(g) * p / static_cast<double>(k);
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
  return grid;
}

std::vector<std::size_t> order_by_pvalue(std::span<const double> pvalues) {
  std::vector<std::size_t> idx(pvalues.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  return idx;
}

Pi0Estimate estimate_pi0(std::span<const double> pvalues, std::span<const double> lambda_grid) {
  check_pvalues(pvalues, "estimate_pi0");
  if (pvalues.size() < 10) throw InvalidArgument("estimate_pi0: need at least 10 p-values");
  if (lambda_grid.size() < 4)
    throw InvalidArgument("estimate_pi0: lambda grid needs at least 4 points for the spline");
  for (std::size_t l = 0; l < lambda_grid.size(); ++l) {
    if (!(lambda_grid[l] >= 0.0 && lambda_grid[l] <= 0.95))
      throw InvalidArgument("estimate_pi0: lambda values must lie in [0, 0.95]");
    if (l > 0 && !(lambda_grid[l] > lambda_grid[l - 1]))
      throw InvalidArgument("estimate_pi0: lambda grid must be strictly increasing");
  }

  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());
  const auto g = static_cast<double>(sorted.size());

  Pi0Estimate est;
  est.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  for (double lambda : lambda_grid) {
    const auto above = static_cast<double>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lambda));
    est.raw.push_back(above / (g * (1.0 - lambda)));
  }

  const auto spline = SmoothingSpline::fit_df(est.lambda_grid, est.raw, kPi0SplineDf);
  est.extrapolated = spline(1.0);
  const double lo = 1.0 / g;
  est.pi0 = std::clamp(est.extrapolated, lo, 1.0);
  est.clamped = !(est.extrapolated > 0.0 && est.extrapolated <= 1.0) || est.pi0 != est.extrapolated;
  return est;
}

Pi0Estimate estimate_pi0(std::span<const double> pvalues) {
  const auto grid = default_lambda_grid();
  return estimate_pi0(pvalues, grid);
}

QValueSet qvalues(std::span<const double> pvalues, double pi0) {
  check_pvalues(pvalues, "qvalues");
  if (!(pi0 > 0.0 && pi0 <= 1.0)) throw InvalidArgument("qvalues: pi0 must lie in (0, 1]");

  const auto order = order_by_pvalue(pvalues);
  const std::size_t g = order.size();
  QValueSet out;
  out.pi0_used = pi0;
  out.q.assign(g, 0.0);

  double next = pi0 * pvalues[order[g - 1]];
  out.q[order[g - 1]] = next;
  for (std::size_t rank = g - 1; rank >= 1; --rank) {
    const std::size_t idx = order[rank - 1];
    next = std::min(pi0 * step_up_ratio(g, pvalues[idx], rank), next);
    out.q[idx] = next;
  }
  return out;
}

RejectionSet bh_procedure(std::span<const double> pvalues, double alpha) {
  check_pvalues(pvalues, "bh_procedure");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("bh_procedure: alpha must lie in (0, 1)");

  const auto order = order_by_pvalue(pvalues);
  RejectionSet out;
  out.alpha = alpha;
  for (std::size_t k = order.size(); k >= 1; --k) {
    // p_(k) <= alpha k / G
    if (step_up_ratio(order.size(), pvalues[order[k - 1]], k) <= alpha) {
      out.k_hat = k;
      break;
    }
  }
  out.rejected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(out.k_hat));
  return out;
}

}  // namespace mtconf
