#include "mtconf/pipeline.hpp"

#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <functional>

#include "mtconf/empirical_null.hpp"
#include "mtconf/error.hpp"
#include "mtconf/fdr.hpp"
#include "mtconf/matrix_io.hpp"
#include "mtconf/sensitivity.hpp"
#include "mtconf/shrinkage.hpp"

namespace mtconf {

namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path partial = dir_ / (name + ".partial");
    std::ofstream out(partial, std::ios::binary);
    if (!out) throw Error("cannot write '" + partial.string() + "'");
    body(out);
    out.close();
    if (!out) throw Error("failed writing '" + partial.string() + "'");
    staged_.push_back(name);
  }

  void commit() {
    for (const auto& name : staged_) fs::rename(dir_ / (name + ".partial"), dir_ / name);
    staged_.clear();
  }

 private:
  fs::path dir_;
  std::vector<std::string> staged_;
};

}  // namespace

nlohmann::json run_pipeline(const RunConfig& config) {
  config.validate();
  if (config.input_path.empty()) throw InvalidArgument("pipeline: no input matrix given");
  OutputDir out(config.output_dir);
  for (const char* name : kPipelineOutputs) fs::remove(fs::path(config.output_dir) / name);

  const auto raw = load_matrix(config.input_path, config.labels_spec);
  const auto filtered = variance_filter(raw, config.variance_threshold);
  const auto tests = unpooled_t_tests(filtered);
  if (tests.results.size() < 100)
    throw InvalidArgument("pipeline: fewer than 100 testable genes remain");

  const std::size_t g = tests.results.size();
  std::vector<std::string> ids(g);
  std::vector<double> t(g), p(g), se(g);
  for (std::size_t i = 0; i < g; ++i) {
    ids[i] = tests.results[i].gene_id;
    t[i] = tests.results[i].t;
    p[i] = tests.results[i].p;
    se[i] = tests.results[i].se;
  }

  // (a) q-values against the theoretical null
  const auto lambda = config.lambda_grid.empty() ? default_lambda_grid() : config.lambda_grid;
  const auto pi0 = estimate_pi0(p, lambda);
  const auto q = qvalues(p, pi0.pi0);
  std::size_t n_sig = 0;
  for (double v : q.q) n_sig += v <= config.q_threshold;
  out.write("qvalues.csv", [&](std::ostream& o) { write_qvalues(o, ids, p, q); });

  // (b) sensitivity sweep
  const auto sweep = sensitivity_sweep(tests.results, config.sensitivity_grid, config.q_threshold);
  out.write("sensitivity.csv", [&](std::ostream& o) { write_sensitivity(o, sweep); });

  // (c) empirical null and local fdr
  EmpiricalNullOptions enull_opts{config.n_bins, config.poly_degree, config.window};
  const auto null = fit_empirical_null(t, enull_opts);
  const auto lfdr = local_fdr(t, null);
  out.write("empirical_null.csv", [&](std::ostream& o) { write_empirical_null(o, null); });
  out.write("local_fdr.csv", [&](std::ostream& o) { write_local_fdr(o, ids, t, lfdr); });

  // (d) double shrinkage and bootstrap intervals
  const auto shrink = double_shrink(t, null);
  BootstrapOptions boot{config.bootstrap_replicates, config.level, config.seed};
  auto cis = bootstrap_cis(t, shrink, null, se, ids, boot);
  for (std::size_t i = 0; i < g; ++i) cis.rows[i].q = q.q[i];
  out.write("cis.csv", [&](std::ostream& o) { write_ci_table(o, cis); });

  // (e) top-k
  const auto top = top_k_report(cis, q, std::min(config.top_k, g));
  out.write("topk.csv", [&](std::ostream& o) { write_ci_table(o, top); });

  std::size_t lfdr_below = 0;
  for (double v : lfdr) lfdr_below += v <= 0.2;
  std::size_t excluded = 0;
  for (const auto& r : cis.rows) excluded += r.excludes_estimate;

  nlohmann::json summary;
  summary["version"] = kVersion;
  summary["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                             std::to_string(EIGEN_MAJOR_VERSION) + "." +
                             std::to_string(EIGEN_MINOR_VERSION);
  summary["seed"] = config.seed;
  summary["counts"] = {{"genes_input", raw.genes()},
                       {"genes_after_filter", filtered.genes()},
                       {"genes_tested", g},
                       {"test_failures", tests.failures.size()},
                       {"q_significant", n_sig},
                       {"local_fdr_le_0.2", lfdr_below},
                       {"ci_excludes_estimate", excluded}};
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& f : tests.failures) failed.push_back(f.gene_id);
  summary["failed_genes"] = failed;
  summary["theoretical_null"] = {{"pi0", pi0.pi0},
                                 {"pi0_extrapolated", pi0.extrapolated},
                                 {"pi0_clamped", pi0.clamped},
                                 {"lambda_grid", pi0.lambda_grid},
                                 {"pi0_lambda", pi0.raw}};
  summary["empirical_null"] = {{"pi0", null.pi0},
                               {"pi0_central_matching", null.pi0_central},
                               {"pi0_clamped", null.pi0_clamped},
                               {"delta0", null.delta0},
                               {"sigma0", null.sigma0},
                               {"window", {null.window.first, null.window.second}},
                               {"f1_truncated", null.f1_truncated}};
  summary["shrinkage"] = {{"mu0_hat", shrink.mu0_hat},
                          {"mu1_hat", shrink.mu1_hat},
                          {"shrink_factor0", shrink.shrink_factor0},
                          {"shrink_factor1", shrink.shrink_factor1}};
  nlohmann::json sens = nlohmann::json::array();
  for (const auto& r : sweep) {
    nlohmann::json row{{"gamma", r.params.gamma}, {"mu_diff", r.params.mu_diff}};
    if (r.error) {
      row["error"] = *r.error;
    } else {
      row["pi0_hat"] = r.pi0_hat;
      row["n_significant"] = r.n_significant;
    }
    sens.push_back(row);
  }
  summary["sensitivity"] = sens;
  summary["config"] = config_to_json(config);

  out.write("summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
  out.commit();
  return summary;
}

}  // namespace mtconf
