#include "mtconf/simulation.hpp"

#include <cmath>
#include <cstdio>

#include "mtconf/error.hpp"
#include "mtconf/rng.hpp"

namespace mtconf {

NullModel parse_null_model(const std::string& name) {
  if (name == "theoretical") return NullModel::theoretical;
  if (name == "scaled") return NullModel::scaled;
  if (name == "shifted") return NullModel::shifted;
  if (name == "shifted_scaled") return NullModel::shifted_scaled;
  if (name == "stratified") return NullModel::stratified;
  throw InvalidArgument("unknown null model '" + name + "'");
}

std::string to_string(NullModel model) {
  switch (model) {
    case NullModel::theoretical: return "theoretical";
    case NullModel::scaled: return "scaled";
    case NullModel::shifted: return "shifted";
    case NullModel::shifted_scaled: return "shifted_scaled";
    case NullModel::stratified: return "stratified";
  }
  return "theoretical";
}

void SimConfig::validate() const {
  if (g == 0) throw InvalidArgument("simulate: G must be positive");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw InvalidArgument("simulate: pi0 must lie in [0, 1]");
  if (!(alt_sd > 0.0) || !(sigma > 0.0) || !(sigma0 > 0.0))
    throw InvalidArgument("simulate: standard deviations must be positive");
  if (!std::isfinite(alt_mean) || !std::isfinite(theta) || !std::isfinite(delta0))
    throw InvalidArgument("simulate: means must be finite");
  if (n_strata < 1) throw InvalidArgument("simulate: n_strata must be >= 1");
}

SimulatedData simulate(const SimConfig& config) {
  config.validate();
  const std::size_t g = config.g;
  SimulatedData out;
  out.stats.resize(g);
  out.true_means.resize(g);
  out.strata.assign(g, 0);
  std::vector<char> alt(g);

  const rng::Stream status(config.seed, rng::stream_id(rng::kTagHypothesisStatus, 0));
  const rng::Stream noise(config.seed, rng::stream_id(rng::kTagStatistic, 0));
  const rng::Stream strata(config.seed, rng::stream_id(rng::kTagStratum, 0));

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(g); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const bool is_alt = status.uniform(i) < 1.0 - config.pi0;
    double mean = 0.0, sd = 1.0;
    int stratum = 0;
    if (is_alt) {
      mean = config.alt_mean;
      sd = config.alt_sd;
    } else {
      switch (config.null_model) {
        case NullModel::theoretical: break;
        case NullModel::scaled: sd = config.sigma; break;
        case NullModel::shifted: mean = config.theta; break;
        case NullModel::shifted_scaled:
          mean = config.delta0;
          sd = config.sigma0;
          break;
        case NullModel::stratified: break;
      }
    }
    if (config.null_model == NullModel::stratified) {
      stratum = std::min(config.n_strata - 1,
                         static_cast<int>(strata.uniform(i) * config.n_strata));
      if (!is_alt) mean = stratum * config.theta;
    }
    alt[i] = is_alt;
    out.strata[i] = stratum;
    out.true_means[i] = mean;
    out.stats[i] = mean + sd * noise.normal(i);
  }
  out.truth.assign(alt.begin(), alt.end());
  return out;
}

namespace {
void check_indices(std::span<const std::size_t> rejected, std::size_t g) {
  for (std::size_t r : rejected)
    if (r >= g) throw InvalidArgument("rejection index " + std::to_string(r) + " out of range");
}
}  // namespace

ConfusionCounts confusion_counts(std::span<const std::size_t> rejected, const std::vector<bool>& truth) {
  check_indices(rejected, truth.size());
  std::vector<char> rej(truth.size(), 0);
  for (std::size_t r : rejected) rej[r] = 1;
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) (rej[i] ? c.s : c.t) += 1;
    else (rej[i] ? c.v : c.u) += 1;
  }
  return c;
}

double empirical_fdr(std::span<const std::size_t> rejected, const std::vector<bool>& truth) {
  const auto c = confusion_counts(rejected, truth);
  const std::size_t q = c.v + c.s;
  return q == 0 ? 0.0 : static_cast<double>(c.v) / static_cast<double>(q);
}

SimulatedExpression simulate_expression(const ExpressionSimConfig& config) {
  if (config.genes == 0) throw InvalidArgument("simulate_expression: need at least one gene");
  if (config.n_strata < 1) throw InvalidArgument("simulate_expression: n_strata must be >= 1");
  if (config.case_prob.size() != static_cast<std::size_t>(config.n_strata))
    throw InvalidArgument("simulate_expression: need one case probability per stratum");
  if (!(config.pi0 >= 0.0 && config.pi0 <= 1.0))
    throw InvalidArgument("simulate_expression: pi0 must lie in [0, 1]");

  const std::size_t g_count = config.genes, n = config.samples;
  std::vector<int> strata(n), labels(n);
  const rng::Stream label_stream(config.seed, rng::stream_id(rng::kTagLabel, 0));
  for (std::size_t j = 0; j < n; ++j) {
    strata[j] = static_cast<int>(j % static_cast<std::size_t>(config.n_strata));
    labels[j] = label_stream.uniform(j) < config.case_prob[static_cast<std::size_t>(strata[j])];
  }

  const rng::Stream status(config.seed, rng::stream_id(rng::kTagHypothesisStatus, 1));
  std::vector<char> alt(g_count);
  std::vector<double> values(g_count * n);
  std::vector<std::string> ids(g_count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t gg = 0; gg < static_cast<std::ptrdiff_t>(g_count); ++gg) {
    const auto g = static_cast<std::size_t>(gg);
    alt[g] = status.uniform(g) < 1.0 - config.pi0;
    const rng::Stream noise(config.seed, rng::stream_id(rng::kTagExpression, g));
    for (std::size_t j = 0; j < n; ++j) {
      double x = strata[j] * config.stratum_shift + noise.normal(j);
      if (alt[g] && labels[j] == 1) x += config.effect;
      values[g * n + j] = x;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "g%06zu", g + 1);
    ids[g] = buf;
  }
  return {ExpressionMatrix(std::move(values), std::move(ids), labels), std::move(strata),
          std::vector<bool>(alt.begin(), alt.end())};
}

}  // namespace mtconf
