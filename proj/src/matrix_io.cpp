#include "mtconf/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mtconf/csv.hpp"
#include "mtconf/error.hpp"
#include "mtconf/normal.hpp"

namespace mtconf {

namespace {

std::map<std::string, int> read_labels_file(const std::string& path) {
  const auto t = csv::read_file(path);
  if (t.header.size() != 2 || t.header[0] != "sample_id" || t.header[1] != "label")
    throw ParseError(path + ": labels file header must be 'sample_id,label'", 1);
  std::map<std::string, int> labels;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& lab = t.rows[r][1];
    if (lab != "0" && lab != "1")
      throw ParseError(path + ": label '" + lab + "' for sample '" + t.rows[r][0] +
                           "' is not 0 or 1",
                       t.line_numbers[r], 2);
    if (!labels.emplace(t.rows[r][0], lab == "1").second)
      throw ParseError(path + ": sample '" + t.rows[r][0] + "' labelled twice", t.line_numbers[r]);
  }
  return labels;
}

}  // namespace

ExpressionMatrix load_matrix(std::istream& in, const std::string& labels_spec) {
  const auto t = csv::read(in);
  if (t.header.size() < 2 || t.header[0] != "gene_id")
    throw ParseError("matrix header must start with 'gene_id' followed by sample ids", 1);
  const std::size_t n = t.header.size() - 1;

  std::vector<int> labels(n);
  if (labels_spec.empty() || labels_spec == "inline") {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& name = t.header[j + 1];
      const auto pos = name.rfind("::");
      const std::string suffix = pos == std::string::npos ? "" : name.substr(pos + 2);
      if (suffix != "0" && suffix != "1")
        throw ParseError("sample '" + name + "' lacks an inline '::0' or '::1' label", 1, j + 2);
      labels[j] = suffix == "1";
    }
  } else {
    auto file_labels = read_labels_file(labels_spec);
    for (std::size_t j = 0; j < n; ++j) {
      const auto it = file_labels.find(t.header[j + 1]);
      if (it == file_labels.end())
        throw ParseError("sample '" + t.header[j + 1] + "' has no entry in labels file " + labels_spec, 1, j + 2);
      labels[j] = it->second;
      file_labels.erase(it);
    }
    if (!file_labels.empty())
      throw ParseError("labels file " + labels_spec + " lists sample '" + file_labels.begin()->first +
                           "' that is not in the matrix",
                       0);
  }

  std::vector<double> values;
  values.reserve(t.rows.size() * n);
  std::vector<std::string> ids;
  ids.reserve(t.rows.size());
  std::map<std::string, std::size_t> first_seen;
  std::string dups;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (!first_seen.emplace(row[0], t.line_numbers[r]).second)
      dups += (dups.empty() ? "" : ", ") + row[0] + " (line " + std::to_string(t.line_numbers[r]) + ")";
    ids.push_back(row[0]);
    for (std::size_t j = 1; j < row.size(); ++j) {
      const auto v = csv::parse_number(row[j]);
      if (!v)
        throw ParseError("non-numeric or missing value '" + row[j] + "' for gene '" + row[0] + "'",
                         t.line_numbers[r], j + 1);
      values.push_back(*v);
    }
  }
  if (!dups.empty()) throw ParseError("duplicate gene ids: " + dups, 0);
  if (ids.empty()) throw ParseError("matrix has no gene rows", 0);
  return ExpressionMatrix(std::move(values), std::move(ids), std::move(labels));
}

ExpressionMatrix load_matrix(const std::string& path, const std::string& labels_spec) {
  if (path == "-") return load_matrix(std::cin, labels_spec);
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file '" + path + "'");
  try {
    return load_matrix(in, labels_spec);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

void write_matrix(std::ostream& out, const ExpressionMatrix& matrix) {
  csv::Writer w(out);
  w.field("gene_id");
  for (std::size_t j = 0; j < matrix.samples(); ++j)
    w.field("s" + std::to_string(j + 1) + "::" + std::to_string(matrix.labels()[j]));
  w.end_row();
  for (std::size_t g = 0; g < matrix.genes(); ++g) {
    w.field(matrix.gene_ids()[g]);
    for (double v : matrix.row(g)) w.field(v);
    w.end_row();
  }
}

void write_test_results(std::ostream& out, std::span<const TestResult> results) {
  csv::Writer w(out);
  w.header({"gene_id", "beta_star", "se", "t", "p"});
  for (const auto& r : results) {
    w.field(r.gene_id).field(r.beta_star).field(r.se).field(r.t).field(r.p);
    w.end_row();
  }
}

std::vector<TestResult> read_test_results(const std::string& path) {
  const auto t = csv::read_file(path);
  const auto id = t.column("gene_id");
  const auto beta = t.column("beta_star");
  const auto se = t.column("se");
  if (!id || !beta || !se)
    throw ParseError(path + ": test results need gene_id, beta_star and se columns", 1);
  const auto b = t.numeric_column(*beta);
  const auto s = t.numeric_column(*se);
  std::vector<TestResult> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!(s[r] > 0.0))
      throw ParseError(path + ": standard error must be positive", t.line_numbers[r], *se + 1);
    out.push_back(make_test_result(t.rows[r][*id], b[r], s[r]));
  }
  return out;
}

void write_qvalues(std::ostream& out, std::span<const std::string> ids, std::span<const double> p,
                   const QValueSet& q) {
  csv::Writer w(out);
  w.header({"gene_id", "p", "q"});
  for (std::size_t i = 0; i < p.size(); ++i) {
    w.field(ids[i]).field(p[i]).field(q.q[i]);
    w.end_row();
  }
}

void write_sensitivity(std::ostream& out, std::span<const SensitivityRow> rows) {
  csv::Writer w(out);
  w.header({"gamma", "mu_diff", "pi0_hat", "n_significant", "error"});
  for (const auto& r : rows) {
    w.field(r.params.gamma).field(r.params.mu_diff);
    if (r.error) {
      w.field("").field("").field(*r.error);
    } else {
      w.field(r.pi0_hat).field(r.n_significant).field("");
    }
    w.end_row();
  }
}

void write_empirical_null(std::ostream& out, const EmpiricalNull& null) {
  csv::Writer w(out);
  w.header({"grid", "f", "f0_scaled", "f1_scaled"});
  for (std::size_t k = 0; k < null.f.grid.size(); ++k) {
    w.field(null.f.grid[k])
        .field(null.f.f[k])
        .field(null.pi0 * null.f0.f[k])
        .field((1.0 - null.pi0) * null.f1.f[k]);
    w.end_row();
  }
}

void write_local_fdr(std::ostream& out, std::span<const std::string> ids, std::span<const double> t,
                     std::span<const double> lfdr) {
  csv::Writer w(out);
  w.header({"gene_id", "t", "local_fdr"});
  for (std::size_t i = 0; i < t.size(); ++i) {
    w.field(ids[i]).field(t[i]).field(lfdr[i]);
    w.end_row();
  }
}

void write_ci_table(std::ostream& out, const CiTable& table) {
  csv::Writer w(out);
  w.header({"gene_id", "statistic", "effect", "ci_low", "ci_high", "q"});
  for (const auto& r : table.rows) {
    w.field(r.gene_id).field(r.t_js).field(r.effect_hat).field(r.ci_low).field(r.ci_high);
    if (std::isnan(r.q)) w.field(""); else w.field(r.q);
    w.end_row();
  }
}

void write_simulated(std::ostream& out, const SimulatedData& data) {
  csv::Writer w(out);
  w.header({"stat", "truth", "true_mean", "stratum"});
  for (std::size_t i = 0; i < data.stats.size(); ++i) {
    w.field(data.stats[i]).field(data.truth[i] ? 1 : 0).field(data.true_means[i]).field(data.strata[i]);
    w.end_row();
  }
}

HypothesisTable read_hypotheses(const std::string& path) {
  const auto t = csv::read_file(path);
  HypothesisTable out;
  const auto id = t.column("gene_id");
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out.ids.push_back(id ? t.rows[r][*id] : "h" + std::to_string(r + 1));
  auto stat_col = t.column("t");
  if (!stat_col) stat_col = t.column("stat");
  if (stat_col) out.stat = t.numeric_column(*stat_col);
  if (const auto p = t.column("p")) {
    out.p = t.numeric_column(*p);
    for (std::size_t r = 0; r < out.p.size(); ++r)
      if (!(out.p[r] >= 0.0 && out.p[r] <= 1.0))
        throw ParseError(path + ": p-value outside [0, 1]", t.line_numbers[r], *p + 1);
  } else if (stat_col) {
    for (double s : out.stat) out.p.push_back(normal_two_sided_p(s));
  } else {
    throw ParseError(path + ": need a 'p', 't' or 'stat' column", 1);
  }
  return out;
}

}  // namespace mtconf
