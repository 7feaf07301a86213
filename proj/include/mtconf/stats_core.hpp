#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mtconf {

/// Genes x samples measurements with a binary phenotype per sample. Values are
/// stored row-major; construction validates shape, unique ids, finiteness and
/// that each class has at least two samples.
class ExpressionMatrix {
 public:
  ExpressionMatrix(std::vector<double> values, std::vector<std::string> gene_ids,
                   std::vector<int> labels);

  std::size_t genes() const noexcept { return gene_ids_.size(); }
  std::size_t samples() const noexcept { return labels_.size(); }

  std::span<const double> row(std::size_t g) const {
    return {values_.data() + g * samples(), samples()};
  }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Columns `cols` only, in the given order. Class counts are re-validated.
  ExpressionMatrix select_samples(std::span<const std::size_t> cols) const;
  ExpressionMatrix select_genes(std::span<const std::size_t> rows) const;

 private:
  std::vector<double> values_;
  std::vector<std::string> gene_ids_;
  std::vector<int> labels_;
};

/// Per-hypothesis Wald test. beta_star is mean(class 1) - mean(class 0).
struct TestResult {
  std::string gene_id;
  double beta_star = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;

  bool operator==(const TestResult&) const = default;
};

struct GeneFailure {
  std::size_t row = 0;
  std::string gene_id;
  std::string reason;
};

/// Results for the rows that could be tested plus one failure per row that
/// could not (zero standard error). Results keep input row order.
struct TTestBatch {
  std::vector<TestResult> results;
  std::vector<GeneFailure> failures;
};

/// Sample variance with denominator n - 1. Two-pass for accuracy.
double sample_variance(std::span<const double> x);

/// Keeps rows whose pooled sample variance is >= threshold. Throws when no row survives.
ExpressionMatrix variance_filter(const ExpressionMatrix& matrix, double threshold);

/// Unpooled (Welch) two-sample statistics referenced to N(0,1). Rows are
/// processed in parallel; output order equals input order.
TTestBatch unpooled_t_tests(const ExpressionMatrix& matrix);

/// Wald statistic and two-sided normal p-value for one row.
TestResult make_test_result(std::string gene_id, double beta_star, double se);

}  // namespace mtconf
