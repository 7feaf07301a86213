// mtconf: multiple testing under confounding.
//
// Effect sign convention throughout: class 1 minus class 0 (e.g. cancer minus normal).

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

#include "mtconf/config.hpp"
#include "mtconf/csv.hpp"
#include "mtconf/empirical_null.hpp"
#include "mtconf/error.hpp"
#include "mtconf/fdr.hpp"
#include "mtconf/matrix_io.hpp"
#include "mtconf/pipeline.hpp"
#include "mtconf/sensitivity.hpp"
#include "mtconf/shrinkage.hpp"
#include "mtconf/simulation.hpp"

namespace {

using namespace mtconf;

/// Flags override config-file values: each flag records a setter that runs
/// only when the flag was given on the command line.
class Overrides {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& target_slot,
                   std::function<void(RunConfig&, const T&)> apply, const std::string& help) {
    auto* opt = app->add_option(name, target_slot, help);
    entries_.push_back({opt, [&target_slot, apply](RunConfig& c) { apply(c, target_slot); }});
    return opt;
  }

  void apply(RunConfig& c) const {
    for (const auto& e : entries_)
      if (e.opt->count() > 0) e.set(c);
  }

 private:
  struct Entry {
    CLI::Option* opt;
    std::function<void(RunConfig&)> set;
  };
  std::vector<Entry> entries_;
};

struct Cli {
  RunConfig defaults;
  std::string config_path;
  std::string output = "-";
  int threads = 0;

  // scratch slots bound to flags
  std::string input, labels, output_dir;
  double variance_threshold = 0, q_threshold = 0, level = 0;
  std::vector<double> lambda_grid, window;
  int n_bins = 0, poly_degree = 0, replicates = 0;
  std::uint64_t seed = 0;
  std::size_t top_k = 0;
};

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*holder) throw Error("cannot write '" + path + "'");
  return *holder;
}

void add_common(CLI::App* sub, Cli& cli, Overrides& ov, bool with_input = true) {
  sub->add_option("--config", cli.config_path, "JSON config file; keys mirror the pipeline config");
  sub->add_option("--threads", cli.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::NonNegativeNumber);
  if (with_input)
    ov.add<std::string>(sub, "--input,-i", cli.input,
                        [](RunConfig& c, const std::string& v) { c.input_path = v; },
                        "Input CSV ('-' for stdin)");
}

void add_enull_flags(CLI::App* sub, Cli& cli, Overrides& ov) {
  ov.add<int>(sub, "--n-bins", cli.n_bins, [](RunConfig& c, const int& v) { c.n_bins = v; },
              "Histogram bins for the marginal density (default 120)");
  ov.add<int>(sub, "--poly-degree", cli.poly_degree,
              [](RunConfig& c, const int& v) { c.poly_degree = v; },
              "Polynomial degree of the log-density fit (default 7)");
  ov.add<std::vector<double>>(sub, "--window", cli.window,
                              [](RunConfig& c, const std::vector<double>& v) {
                                if (v.size() != 2) throw InvalidArgument("--window takes LOW HIGH");
                                c.window = std::make_pair(v[0], v[1]);
                              },
                              "Zero-assumption window LOW HIGH (default mode +/- 1)")
      ->expected(2);
}

void add_boot_flags(CLI::App* sub, Cli& cli, Overrides& ov) {
  ov.add<int>(sub, "--replicates,-B", cli.replicates,
              [](RunConfig& c, const int& v) { c.bootstrap_replicates = v; },
              "Bootstrap replicates (default 1000)");
  ov.add<double>(sub, "--level", cli.level, [](RunConfig& c, const double& v) { c.level = v; },
                 "Interval level (default 0.95)");
  ov.add<std::uint64_t>(sub, "--seed", cli.seed,
                        [](RunConfig& c, const std::uint64_t& v) { c.seed = v; },
                        "Bootstrap seed (default 20070101)");
  ov.add<std::size_t>(sub, "--top-k", cli.top_k, [](RunConfig& c, const std::size_t& v) { c.top_k = v; },
                      "Rows in the top-k report (default 20)");
}

RunConfig resolve(const Cli& cli, const Overrides& ov) {
  RunConfig c = cli.config_path.empty() ? cli.defaults : load_config_file(cli.config_path, cli.defaults);
  ov.apply(c);
  if (cli.threads > 0) c.threads = cli.threads;
  c.validate();
  if (c.threads > 0) omp_set_num_threads(c.threads);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple testing under confounding: q-values, BH, sensitivity analysis, "
               "empirical null, double shrinkage and bootstrap intervals.\n"
               "Effects are class 1 minus class 0."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Cli cli;
  Overrides ov_test, ov_q, ov_bh, ov_sens, ov_enull, ov_shrink, ov_pipe;

  // test
  auto* test = app.add_subcommand("test", "Variance filter and unpooled two-sample t-tests");
  add_common(test, cli, ov_test);
  ov_test.add<std::string>(test, "--labels", cli.labels,
                           [](RunConfig& c, const std::string& v) { c.labels_spec = v; },
                           "sample_id,label CSV (default: inline ::0/::1 header suffixes)");
  ov_test.add<double>(test, "--variance-threshold", cli.variance_threshold,
                      [](RunConfig& c, const double& v) { c.variance_threshold = v; },
                      "Drop genes with sample variance below this (default 0.05)");
  test->add_option("--output,-o", cli.output, "Output CSV (default stdout)");

  // qvalue
  auto* qv = app.add_subcommand("qvalue", "pi0 estimate and q-values from p-values or statistics");
  add_common(qv, cli, ov_q);
  ov_q.add<std::vector<double>>(qv, "--lambda-grid", cli.lambda_grid,
                                [](RunConfig& c, const std::vector<double>& v) { c.lambda_grid = v; },
                                "Lambda grid (default 0.05,0.10,...,0.95)")
      ->delimiter(',');
  double fixed_pi0 = 0.0;
  auto* pi0_opt = qv->add_option("--pi0", fixed_pi0, "Use this pi0 instead of estimating it");
  qv->add_option("--output,-o", cli.output, "Output CSV (default stdout)");

  // bh
  auto* bh = app.add_subcommand("bh", "Benjamini-Hochberg step-up procedure");
  add_common(bh, cli, ov_bh);
  double alpha = 0.05;
  bh->add_option("--alpha", alpha, "FDR level (default 0.05)");
  bh->add_option("--output,-o", cli.output, "Output CSV (default stdout)");

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity", "Mean-shift sensitivity sweep over (gamma, mu1 - mu0)");
  add_common(sens, cli, ov_sens);
  std::vector<double> gammas, mu_diffs;
  sens->add_option("--gamma", gammas, "Confounder effects (crossed with --mu-diff)")->delimiter(',');
  sens->add_option("--mu-diff", mu_diffs, "Confounder mean differences mu1 - mu0")->delimiter(',');
  ov_sens.add<double>(sens, "--q-threshold", cli.q_threshold,
                      [](RunConfig& c, const double& v) { c.q_threshold = v; },
                      "Count q-values at or below this (default 0.05)");
  sens->add_option("--output,-o", cli.output, "Output CSV (default stdout)");

  // enull
  auto* enull = app.add_subcommand("enull", "Empirical null fit and local fdr");
  add_common(enull, cli, ov_enull);
  add_enull_flags(enull, cli, ov_enull);
  ov_enull.add<std::string>(enull, "--output-dir", cli.output_dir,
                            [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                            "Directory for empirical_null.csv and local_fdr.csv");

  // shrink
  auto* shrink = app.add_subcommand("shrink", "Double shrinkage estimates with bootstrap intervals");
  add_common(shrink, cli, ov_shrink);
  add_enull_flags(shrink, cli, ov_shrink);
  add_boot_flags(shrink, cli, ov_shrink);
  shrink->add_option("--output,-o", cli.output, "Output CSV (default stdout)");
  std::string topk_path;
  shrink->add_option("--topk-output", topk_path, "Also write the top-k report (by q-value) here");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a synthetic dataset with known truth");
  sim->add_option("--threads", cli.threads, "Worker threads")->check(CLI::NonNegativeNumber);
  SimConfig sc;
  std::string null_model = "theoretical";
  sim->add_option("--g", sc.g, "Number of hypotheses (default 10000)");
  sim->add_option("--pi0", sc.pi0, "Null proportion (default 0.9)");
  sim->add_option("--null-model", null_model,
                  "theoretical | scaled | shifted | shifted_scaled | stratified");
  sim->add_option("--alt-mean", sc.alt_mean, "Alternative mean (default 3)");
  sim->add_option("--alt-sd", sc.alt_sd, "Alternative sd (default 1)");
  sim->add_option("--sigma", sc.sigma, "Null sd for the scaled model");
  sim->add_option("--theta", sc.theta, "Null shift (shifted) or per-stratum shift (stratified)");
  sim->add_option("--delta0", sc.delta0, "Null mean for shifted_scaled");
  sim->add_option("--sigma0", sc.sigma0, "Null sd for shifted_scaled");
  sim->add_option("--n-strata", sc.n_strata, "Strata for the stratified model (default 2)");
  sim->add_option("--seed", sc.seed, "Seed (default 1)");
  std::size_t samples = 0;
  double effect = 1.0, case_fraction = 0.5;
  sim->add_option("--samples", samples,
                  "Emit a genes x samples expression matrix with this many samples instead of statistics");
  sim->add_option("--effect", effect, "Mean difference of alternative genes in matrix mode (default 1)");
  sim->add_option("--case-fraction", case_fraction, "Probability a sample is class 1 in matrix mode");
  sim->add_option("--output,-o", cli.output, "Output CSV (default stdout)");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Full analysis; writes seven files into --output-dir");
  add_common(pipe, cli, ov_pipe);
  ov_pipe.add<std::string>(pipe, "--labels", cli.labels,
                           [](RunConfig& c, const std::string& v) { c.labels_spec = v; },
                           "sample_id,label CSV (default: inline ::0/::1 header suffixes)");
  ov_pipe.add<double>(pipe, "--variance-threshold", cli.variance_threshold,
                      [](RunConfig& c, const double& v) { c.variance_threshold = v; },
                      "Variance filter threshold (default 0.05)");
  ov_pipe.add<std::vector<double>>(pipe, "--lambda-grid", cli.lambda_grid,
                                   [](RunConfig& c, const std::vector<double>& v) { c.lambda_grid = v; },
                                   "Lambda grid for pi0")
      ->delimiter(',');
  ov_pipe.add<double>(pipe, "--q-threshold", cli.q_threshold,
                      [](RunConfig& c, const double& v) { c.q_threshold = v; },
                      "q-value cut-off for counts (default 0.05)");
  add_enull_flags(pipe, cli, ov_pipe);
  add_boot_flags(pipe, cli, ov_pipe);
  ov_pipe.add<std::string>(pipe, "--output-dir", cli.output_dir,
                           [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                           "Output directory (default mtconf_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    std::unique_ptr<std::ofstream> holder;
    if (*test) {
      auto c = resolve(cli, ov_test);
      if (c.input_path.empty()) c.input_path = "-";
      const auto m = variance_filter(load_matrix(c.input_path, c.labels_spec), c.variance_threshold);
      const auto batch = unpooled_t_tests(m);
      for (const auto& f : batch.failures)
        std::cerr << "warning: gene " << f.gene_id << " not tested: " << f.reason << '\n';
      write_test_results(open_output(cli.output, holder), batch.results);
    } else if (*qv) {
      auto c = resolve(cli, ov_q);
      const auto h = read_hypotheses(c.input_path.empty() ? "-" : c.input_path);
      double pi0 = fixed_pi0;
      if (pi0_opt->count() == 0) {
        const auto grid = c.lambda_grid.empty() ? default_lambda_grid() : c.lambda_grid;
        const auto est = estimate_pi0(h.p, grid);
        pi0 = est.pi0;
        std::cerr << "pi0 = " << csv::format(pi0) << (est.clamped ? " (clamped)" : "") << '\n';
      }
      write_qvalues(open_output(cli.output, holder), h.ids, h.p, qvalues(h.p, pi0));
    } else if (*bh) {
      resolve(cli, ov_bh);
      const auto h = read_hypotheses(cli.input.empty() ? "-" : cli.input);
      const auto rej = bh_procedure(h.p, alpha);
      std::vector<char> flag(h.p.size(), 0);
      for (auto r : rej.rejected) flag[r] = 1;
      auto& o = open_output(cli.output, holder);
      csv::Writer w(o);
      w.header({"gene_id", "p", "rejected"});
      for (std::size_t i = 0; i < h.p.size(); ++i) {
        w.field(h.ids[i]).field(h.p[i]).field(flag[i] ? 1 : 0);
        w.end_row();
      }
      std::cerr << "rejected " << rej.k_hat << " of " << h.p.size() << " at alpha "
                << csv::format(alpha) << '\n';
    } else if (*sens) {
      auto c = resolve(cli, ov_sens);
      const auto results = read_test_results(c.input_path.empty() ? "-" : c.input_path);
      std::vector<SensitivityParams> grid;
      if (gammas.empty() && mu_diffs.empty()) {
        grid = c.sensitivity_grid;
      } else {
        if (gammas.empty() || mu_diffs.empty())
          throw InvalidArgument("--gamma and --mu-diff must be given together");
        for (double gm : gammas)
          for (double md : mu_diffs) grid.push_back({gm, md});
      }
      write_sensitivity(open_output(cli.output, holder),
                        sensitivity_sweep(results, grid, c.q_threshold));
    } else if (*enull) {
      auto c = resolve(cli, ov_enull);
      const auto h = read_hypotheses(c.input_path.empty() ? "-" : c.input_path);
      if (h.stat.empty()) throw InvalidArgument("enull needs a 't' or 'stat' column");
      const auto null = fit_empirical_null(h.stat, {c.n_bins, c.poly_degree, c.window});
      const auto lfdr = local_fdr(h.stat, null);
      std::filesystem::create_directories(c.output_dir);
      std::ofstream en(std::filesystem::path(c.output_dir) / "empirical_null.csv", std::ios::binary);
      write_empirical_null(en, null);
      std::ofstream lf(std::filesystem::path(c.output_dir) / "local_fdr.csv", std::ios::binary);
      write_local_fdr(lf, h.ids, h.stat, lfdr);
      nlohmann::json s{{"delta0", null.delta0}, {"sigma0", null.sigma0}, {"pi0", null.pi0},
                       {"pi0_clamped", null.pi0_clamped},
                       {"window", {null.window.first, null.window.second}}};
      std::cout << s.dump(2) << '\n';
    } else if (*shrink) {
      auto c = resolve(cli, ov_shrink);
      const auto results = read_test_results(c.input_path.empty() ? "-" : c.input_path);
      std::vector<std::string> ids;
      std::vector<double> t, se, p;
      for (const auto& r : results) {
        ids.push_back(r.gene_id);
        t.push_back(r.t);
        se.push_back(r.se);
        p.push_back(r.p);
      }
      const auto null = fit_empirical_null(t, {c.n_bins, c.poly_degree, c.window});
      const auto js = double_shrink(t, null);
      auto table = bootstrap_cis(t, js, null, se, ids, {c.bootstrap_replicates, c.level, c.seed});
      const auto q = qvalues(p, estimate_pi0(p).pi0);
      for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].q = q.q[i];
      write_ci_table(open_output(cli.output, holder), table);
      if (!topk_path.empty()) {
        std::ofstream tk(topk_path, std::ios::binary);
        if (!tk) throw Error("cannot write '" + topk_path + "'");
        write_ci_table(tk, top_k_report(table, q, std::min(c.top_k, table.rows.size())));
      }
    } else if (*sim) {
      if (cli.threads > 0) omp_set_num_threads(cli.threads);
      auto& o = open_output(cli.output, holder);
      if (samples > 0) {
        ExpressionSimConfig ec;
        ec.genes = sc.g;
        ec.samples = samples;
        ec.pi0 = sc.pi0;
        ec.effect = effect;
        ec.case_prob = {case_fraction};
        ec.seed = sc.seed;
        write_matrix(o, simulate_expression(ec).matrix);
      } else {
        sc.null_model = parse_null_model(null_model);
        write_simulated(o, simulate(sc));
      }
    } else if (*pipe) {
      const auto c = resolve(cli, ov_pipe);
      const auto summary = run_pipeline(c);
      std::cerr << "pi0 (theoretical null) = " << csv::format(summary["theoretical_null"]["pi0"].get<double>())
                << ", pi0 (empirical null) = " << csv::format(summary["empirical_null"]["pi0"].get<double>())
                << "; outputs in " << c.output_dir << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
