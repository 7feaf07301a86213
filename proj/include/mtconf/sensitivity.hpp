#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtconf/stats_core.hpp"

namespace mtconf {

/// Unmeasured continuous confounder: gamma is its effect on the measurement,
/// mu_diff = mu_1 - mu_0 the difference of its means between phenotype classes.
struct SensitivityParams {
  double gamma = 0.0;
  double mu_diff = 0.0;

  double shift() const noexcept { return gamma * mu_diff; }
};

struct SensitivityRow {
  SensitivityParams params;
  double pi0_hat = 0.0;
  std::size_t n_significant = 0;
  std::optional<std::string> error;  // set when this grid point failed
};

/// beta = beta_star - gamma * mu_diff with se unchanged; t and p recomputed.
std::vector<TestResult> adjust_results(std::span<const TestResult> results,
                                       const SensitivityParams& params);

/// For each grid point: adjust, estimate pi0 on the default lambda grid,
/// compute q-values and count q <= q_threshold. Rows follow grid order.
std::vector<SensitivityRow> sensitivity_sweep(std::span<const TestResult> results,
                                              std::span<const SensitivityParams> grid,
                                              double q_threshold);

/// (0, 0) followed by gamma in {1.5, 0.1} crossed with mu_diff in {0.01, 0.1, 0.3, 0.5, 1}.
std::vector<SensitivityParams> default_sensitivity_grid();

}  // namespace mtconf
