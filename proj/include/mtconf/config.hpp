#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtconf/sensitivity.hpp"

namespace mtconf {

/// Every knob of the end-to-end analysis. Defaults follow the reference
/// microarray workflow: variance filter 0.05, q cut-off 0.05, top 20 genes,
/// 95% equal-tail intervals.
struct RunConfig {
  std::string input_path;
  std::string labels_spec;  // labels CSV path, or empty / "inline"
  double variance_threshold = 0.05;
  std::vector<double> lambda_grid;  // empty means the default grid
  double q_threshold = 0.05;
  std::vector<SensitivityParams> sensitivity_grid = default_sensitivity_grid();
  int n_bins = 120;
  int poly_degree = 7;
  std::optional<std::pair<double, double>> window;
  int bootstrap_replicates = 1000;
  double level = 0.95;
  std::uint64_t seed = 20070101;
  std::size_t top_k = 20;
  std::string output_dir = "mtconf_out";
  int threads = 0;  // 0 = runtime default; never affects results

  /// Throws InvalidArgument describing the first invalid field.
  void validate() const;
};

/// Applies keys of a JSON object onto `config`. Unknown keys are rejected.
void apply_config_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Echo of the numeric configuration (thread count excluded).
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace mtconf
