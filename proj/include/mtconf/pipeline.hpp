#pragma once

#include <json.hpp>

#include "mtconf/config.hpp"

namespace mtconf {

inline constexpr const char* kVersion = "0.1.0";

/// Names of the files `run_pipeline` writes into the output directory.
inline constexpr const char* kPipelineOutputs[] = {
    "qvalues.csv", "sensitivity.csv", "empirical_null.csv", "local_fdr.csv",
    "cis.csv",     "topk.csv",        "summary.json"};

/// filter -> t-tests -> q-values under N(0,1) -> sensitivity sweep ->
/// empirical null + local fdr -> double shrinkage + bootstrap intervals ->
/// top-k report. Files are first written with a `.partial` suffix and renamed
/// once every stage has succeeded; on failure the `.partial` files remain and
/// the error propagates. Returns the summary document.
nlohmann::json run_pipeline(const RunConfig& config);

}  // namespace mtconf
