#include "mtconf/sensitivity.hpp"

#include <cmath>

#include "mtconf/error.hpp"
#include "mtconf/fdr.hpp"
#include "mtconf/normal.hpp"

namespace mtconf {

std::vector<TestResult> adjust_results(std::span<const TestResult> results,
                                       const SensitivityParams& params) {
  if (!std::isfinite(params.gamma) || !std::isfinite(params.mu_diff))
    throw InvalidArgument("adjust_results: sensitivity parameters must be finite");
  const double shift = params.shift();
  std::vector<TestResult> out;
  out.reserve(results.size());
  for (const auto& r : results) {
    if (!(r.se > 0.0)) throw InvalidArgument("adjust_results: non-positive standard error for " + r.gene_id);
    out.push_back(make_test_result(r.gene_id, r.beta_star - shift, r.se));
  }
  return out;
}

std::vector<SensitivityRow> sensitivity_sweep(std::span<const TestResult> results,
                                              std::span<const SensitivityParams> grid,
                                              double q_threshold) {
  if (grid.empty()) throw InvalidArgument("sensitivity_sweep: empty parameter grid");
  if (!(q_threshold > 0.0 && q_threshold < 1.0))
    throw InvalidArgument("sensitivity_sweep: q threshold must lie in (0, 1)");

  std::vector<SensitivityRow> rows(grid.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    SensitivityRow& row = rows[k];
    row.params = grid[k];
    try {
      const auto adjusted = adjust_results(results, grid[k]);
      std::vector<double> p;
      p.reserve(adjusted.size());
      for (const auto& r : adjusted) p.push_back(r.p);
      const auto pi0 = estimate_pi0(p);
      const auto q = qvalues(p, pi0.pi0);
      row.pi0_hat = pi0.pi0;
      for (double v : q.q) row.n_significant += v <= q_threshold;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

std::vector<SensitivityParams> default_sensitivity_grid() {
  std::vector<SensitivityParams> grid{{0.0, 0.0}};
  for (double gamma : {1.5, 0.1})
    for (double mu : {0.01, 0.1, 0.3, 0.5, 1.0}) grid.push_back({gamma, mu});
  return grid;
}

}  // namespace mtconf
