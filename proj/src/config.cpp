#include "mtconf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mtconf/error.hpp"
#include "mtconf/fdr.hpp"

namespace mtconf {

void RunConfig::validate() const {
  if (!(variance_threshold > 0.0)) throw InvalidArgument("variance_threshold must be > 0");
  if (!(q_threshold > 0.0 && q_threshold < 1.0)) throw InvalidArgument("q_threshold must lie in (0, 1)");
  if (!lambda_grid.empty() && lambda_grid.size() < 4)
    throw InvalidArgument("lambda_grid needs at least 4 values");
  if (sensitivity_grid.empty()) throw InvalidArgument("sensitivity_grid must not be empty");
  if (n_bins < 20) throw InvalidArgument("n_bins must be >= 20");
  if (poly_degree < 2 || poly_degree > 10) throw InvalidArgument("poly_degree must lie in [2, 10]");
  if (window && !(window->first < window->second)) throw InvalidArgument("window must satisfy low < high");
  if (bootstrap_replicates < 100) throw InvalidArgument("bootstrap_replicates must be >= 100");
  if (!(level > 0.5 && level < 1.0)) throw InvalidArgument("level must lie in (0.5, 1)");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
}

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config: top level must be a JSON object");
  static const std::set<std::string> known{
      "input", "labels", "variance_threshold", "lambda_grid", "q_threshold",
      "sensitivity_grid", "n_bins", "poly_degree", "window", "bootstrap_replicates",
      "level", "seed", "top_k", "output_dir", "threads"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw InvalidArgument("config: unknown key '" + key + "'");

  try {
    if (j.contains("input")) c.input_path = j.at("input").get<std::string>();
    if (j.contains("labels")) c.labels_spec = j.at("labels").get<std::string>();
    if (j.contains("variance_threshold")) c.variance_threshold = j.at("variance_threshold").get<double>();
    if (j.contains("lambda_grid")) c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    if (j.contains("q_threshold")) c.q_threshold = j.at("q_threshold").get<double>();
    if (j.contains("sensitivity_grid")) {
      c.sensitivity_grid.clear();
      for (const auto& pair : j.at("sensitivity_grid")) {
        const auto v = pair.get<std::vector<double>>();
        if (v.size() != 2) throw InvalidArgument("config: sensitivity_grid entries are [gamma, mu_diff]");
        c.sensitivity_grid.push_back({v[0], v[1]});
      }
    }
    if (j.contains("n_bins")) c.n_bins = j.at("n_bins").get<int>();
    if (j.contains("poly_degree")) c.poly_degree = j.at("poly_degree").get<int>();
    if (j.contains("window")) {
      if (j.at("window").is_null()) {
        c.window.reset();
      } else {
        const auto w = j.at("window").get<std::vector<double>>();
        if (w.size() != 2) throw InvalidArgument("config: window is [low, high]");
        c.window = std::make_pair(w[0], w[1]);
      }
    }
    if (j.contains("bootstrap_replicates")) c.bootstrap_replicates = j.at("bootstrap_replicates").get<int>();
    if (j.contains("level")) c.level = j.at("level").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("top_k")) c.top_k = j.at("top_k").get<std::size_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
  apply_config_json(base, j);
  return base;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["input"] = c.input_path;
  j["labels"] = c.labels_spec;
  j["variance_threshold"] = c.variance_threshold;
  j["lambda_grid"] = c.lambda_grid.empty() ? default_lambda_grid() : c.lambda_grid;
  j["q_threshold"] = c.q_threshold;
  auto grid = nlohmann::json::array();
  for (const auto& p : c.sensitivity_grid) grid.push_back({p.gamma, p.mu_diff});
  j["sensitivity_grid"] = grid;
  j["n_bins"] = c.n_bins;
  j["poly_degree"] = c.poly_degree;
  j["window"] = c.window ? nlohmann::json{c.window->first, c.window->second} : nlohmann::json(nullptr);
  j["bootstrap_replicates"] = c.bootstrap_replicates;
  j["level"] = c.level;
  j["seed"] = c.seed;
  j["top_k"] = c.top_k;
  return j;
}

}  // namespace mtconf
