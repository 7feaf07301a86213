#pragma once

// Single-threaded reference versions of the parallel kernels. They are kept
// deliberately plain and are used by the tests and the benchmark as the
// baseline the OpenMP kernels must reproduce.

#include <span>
#include <string>

#include "mtconf/shrinkage.hpp"
#include "mtconf/simulation.hpp"
#include "mtconf/stats_core.hpp"

namespace mtconf::reference {

TTestBatch unpooled_t_tests(const ExpressionMatrix& matrix);

SimulatedData simulate(const SimConfig& config);

/// Materialises the full replicate matrix and sorts each row; O(G B) memory.
CiTable bootstrap_cis(std::span<const double> stats, const ShrinkageResult& shrink,
                      const EmpiricalNull& null, std::span<const double> ses,
                      std::span<const std::string> gene_ids, const BootstrapOptions& options);

}  // namespace mtconf::reference
