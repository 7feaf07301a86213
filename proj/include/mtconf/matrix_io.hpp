#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mtconf/empirical_null.hpp"
#include "mtconf/fdr.hpp"
#include "mtconf/sensitivity.hpp"
#include "mtconf/shrinkage.hpp"
#include "mtconf/simulation.hpp"
#include "mtconf/stats_core.hpp"

namespace mtconf {

/// Reads `gene_id,<sample ids...>` rows. Labels come from `labels_spec`, a
/// `sample_id,label` CSV, or when it is empty or "inline" from `::0`/`::1`
/// suffixes on the sample ids in the header.
ExpressionMatrix load_matrix(const std::string& path, const std::string& labels_spec);
ExpressionMatrix load_matrix(std::istream& matrix, const std::string& labels_spec);

/// Writes a matrix with inline `::label` header suffixes.
void write_matrix(std::ostream& out, const ExpressionMatrix& matrix);

void write_test_results(std::ostream& out, std::span<const TestResult> results);
/// Needs gene_id, beta_star and se; t and p are recomputed from them.
std::vector<TestResult> read_test_results(const std::string& path);

void write_qvalues(std::ostream& out, std::span<const std::string> ids, std::span<const double> p,
                   const QValueSet& q);
void write_sensitivity(std::ostream& out, std::span<const SensitivityRow> rows);
void write_empirical_null(std::ostream& out, const EmpiricalNull& null);
void write_local_fdr(std::ostream& out, std::span<const std::string> ids,
                     std::span<const double> t, std::span<const double> lfdr);
void write_ci_table(std::ostream& out, const CiTable& table);
void write_simulated(std::ostream& out, const SimulatedData& data);

/// Statistics or p-values from a CSV. The id column is `gene_id` if present,
/// otherwise `h<row>`; p-values come from a `p` column, or are computed from a
/// `t` or `stat` column against N(0, 1).
struct HypothesisTable {
  std::vector<std::string> ids;
  std::vector<double> p;
  std::vector<double> stat;  // empty when only p-values were given
};

HypothesisTable read_hypotheses(const std::string& path);

}  // namespace mtconf
