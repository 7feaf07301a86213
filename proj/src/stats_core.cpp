#include "mtconf/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mtconf/error.hpp"
#include "mtconf/normal.hpp"

namespace mtconf {

ExpressionMatrix::ExpressionMatrix(std::vector<double> values, std::vector<std::string> gene_ids,
                                   std::vector<int> labels)
    : values_(std::move(values)), gene_ids_(std::move(gene_ids)), labels_(std::move(labels)) {
  if (values_.size() != gene_ids_.size() * labels_.size())
    throw InvalidArgument("expression matrix: value count " + std::to_string(values_.size()) +
                          " does not match " + std::to_string(gene_ids_.size()) + " genes x " +
                          std::to_string(labels_.size()) + " samples");
  std::size_t n1 = 0;
  for (int d : labels_) {
    if (d != 0 && d != 1) throw InvalidArgument("expression matrix: labels must be 0 or 1");
    n1 += static_cast<std::size_t>(d);
  }
  const std::size_t n0 = labels_.size() - n1;
  if (n0 < 2 || n1 < 2)
    throw InvalidArgument("expression matrix: each phenotype class needs at least 2 samples (have " +
                          std::to_string(n0) + " with label 0, " + std::to_string(n1) +
                          " with label 1)");
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(gene_ids_.size());
  std::string dups;
  for (const auto& id : gene_ids_) {
    if (++seen[id] == 2) dups += (dups.empty() ? "" : ", ") + id;
  }
  if (!dups.empty()) throw InvalidArgument("expression matrix: duplicate gene ids: " + dups);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      throw InvalidArgument("expression matrix: non-finite value for gene " +
                            gene_ids_[k / labels_.size()]);
  }
}

ExpressionMatrix ExpressionMatrix::select_samples(std::span<const std::size_t> cols) const {
  const std::size_t n = samples();
  std::vector<double> v;
  v.reserve(genes() * cols.size());
  for (std::size_t g = 0; g < genes(); ++g) {
    for (std::size_t c : cols) v.push_back(values_[g * n + c]);
  }
  std::vector<int> l;
  l.reserve(cols.size());
  for (std::size_t c : cols) l.push_back(labels_.at(c));
  return ExpressionMatrix(std::move(v), gene_ids_, std::move(l));
}

ExpressionMatrix ExpressionMatrix::select_genes(std::span<const std::size_t> rows) const {
  std::vector<double> v;
  v.reserve(rows.size() * samples());
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (std::size_t g : rows) {
    const auto r = row(g);
    v.insert(v.end(), r.begin(), r.end());
    ids.push_back(gene_ids_.at(g));
  }
  return ExpressionMatrix(std::move(v), std::move(ids), labels_);
}

double sample_variance(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(n - 1);
}

ExpressionMatrix variance_filter(const ExpressionMatrix& matrix, double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw InvalidArgument("variance_filter: threshold must be a positive finite number");
  const auto g_count = static_cast<std::ptrdiff_t>(matrix.genes());
  std::vector<char> keep(matrix.genes(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < g_count; ++g) {
    keep[g] = sample_variance(matrix.row(static_cast<std::size_t>(g))) >= threshold;
  }
  std::vector<std::size_t> rows;
  for (std::size_t g = 0; g < keep.size(); ++g)
    if (keep[g]) rows.push_back(g);
  if (rows.empty())
    throw InvalidArgument("variance_filter: no hypotheses remain after filtering at threshold " +
                          std::to_string(threshold));
  return matrix.select_genes(rows);
}

TestResult make_test_result(std::string gene_id, double beta_star, double se) {
  TestResult r;
  r.gene_id = std::move(gene_id);
  r.beta_star = beta_star;
  r.se = se;
  r.t = beta_star / se;
  r.p = normal_two_sided_p(r.t);
  return r;
}

namespace {

struct ClassMoments {
  double mean[2] = {0.0, 0.0};
  double var[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
};

ClassMoments class_moments(std::span<const double> row, const std::vector<int>& labels) {
  ClassMoments m;
  for (std::size_t i = 0; i < row.size(); ++i) {
    m.mean[labels[i]] += row[i];
    ++m.count[labels[i]];
  }
  for (int k = 0; k < 2; ++k) m.mean[k] /= static_cast<double>(m.count[k]);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double dev = row[i] - m.mean[labels[i]];
    m.var[labels[i]] += dev * dev;
  }
  for (int k = 0; k < 2; ++k) m.var[k] /= static_cast<double>(m.count[k] - 1);
  return m;
}

}  // namespace

TTestBatch unpooled_t_tests(const ExpressionMatrix& matrix) {
  const std::size_t g_count = matrix.genes();
  const auto& labels = matrix.labels();
  std::vector<double> beta(g_count), se(g_count);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(g_count); ++g) {
    const ClassMoments m = class_moments(matrix.row(static_cast<std::size_t>(g)), labels);
    beta[g] = m.mean[1] - m.mean[0];
    se[g] = std::sqrt(m.var[1] / static_cast<double>(m.count[1]) +
                      m.var[0] / static_cast<double>(m.count[0]));
  }

  TTestBatch out;
  out.results.reserve(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    const auto& id = matrix.gene_ids()[g];
    if (!(se[g] > 0.0)) {
      out.failures.push_back({g, id, "zero standard error (both classes constant)"});
      continue;
    }
    out.results.push_back(make_test_result(id, beta[g], se[g]));
  }
  return out;
}

}  // namespace mtconf
