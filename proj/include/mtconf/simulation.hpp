#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtconf/stats_core.hpp"

namespace mtconf {

enum class NullModel { theoretical, scaled, shifted, shifted_scaled, stratified };

NullModel parse_null_model(const std::string& name);
std::string to_string(NullModel model);

/// Two-group mixture of test statistics. Nulls follow `null_model`:
///   theoretical N(0,1), scaled N(0, sigma^2), shifted N(theta, 1),
///   shifted_scaled N(delta0, sigma0^2), stratified N(s theta, 1) for stratum s.
/// Alternatives follow N(alt_mean, alt_sd^2).
struct SimConfig {
  std::size_t g = 10000;
  double pi0 = 0.9;
  NullModel null_model = NullModel::theoretical;
  double alt_mean = 3.0;
  double alt_sd = 1.0;
  double sigma = 1.0;
  double theta = 0.0;
  double delta0 = 0.0;
  double sigma0 = 1.0;
  int n_strata = 2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimulatedData {
  std::vector<double> stats;
  std::vector<bool> truth;  // true = alternative
  std::vector<double> true_means;
  std::vector<int> strata;  // all 0 unless stratified

  bool operator==(const SimulatedData&) const = default;
};

SimulatedData simulate(const SimConfig& config);

/// Cells of the outcome table: U (null, accepted), V (null, rejected),
/// T (alternative, accepted), S (alternative, rejected).
struct ConfusionCounts {
  std::size_t u = 0, v = 0, t = 0, s = 0;
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion_counts(std::span<const std::size_t> rejected, const std::vector<bool>& truth);

/// Realised false discovery proportion V / Q, 0 when nothing is rejected.
double empirical_fdr(std::span<const std::size_t> rejected, const std::vector<bool>& truth);

/// Expression matrix with an optional confounding stratum. Sample j belongs
/// to stratum j mod n_strata and is a case with probability case_prob[stratum].
/// Every gene is shifted by stratum * stratum_shift; alternative genes add
/// `effect` in cases. Noise is N(0, 1).
struct ExpressionSimConfig {
  std::size_t genes = 2000;
  std::size_t samples = 60;
  double pi0 = 0.9;
  double effect = 1.0;
  int n_strata = 1;
  double stratum_shift = 0.0;
  std::vector<double> case_prob{0.5};
  std::uint64_t seed = 1;
};

struct SimulatedExpression {
  ExpressionMatrix matrix;
  std::vector<int> strata;
  std::vector<bool> truth;
};

SimulatedExpression simulate_expression(const ExpressionSimConfig& config);

}  // namespace mtconf
