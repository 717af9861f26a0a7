#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diagseq/bench.hpp"
#include "diagseq/generator.hpp"

namespace diagseq {

/// Bench settings read from a flat `key = value` file. Lists are comma
/// separated; `#` starts a comment. Keys:
///   dpis, generate_count, generate_axioms, generate_atoms,
///   generate_conflicts, generate_min_size, generate_max_size,
///   generate_seed, generate_overlap, measures, dists, prob_choices,
///   strategies, ld, runs, seed, max_queries, jobs
struct BenchConfig {
  std::vector<std::filesystem::path> dpi_paths;
  std::size_t generate_count = 0;
  GeneratorParams generator;
  std::vector<MeasureKind> measures{std::begin(kAllMeasures), std::end(kAllMeasures)};
  std::vector<DistributionKind> dists{DistributionKind::kEq, DistributionKind::kMod,
                                      DistributionKind::kStr};
  std::size_t prob_choices = 3;
  std::vector<OracleKind> strategies{std::begin(kAllOracles), std::end(kAllOracles)};
  std::vector<std::size_t> ld_values{6, 10, 14};
  std::size_t runs = 20;
  std::uint64_t seed = 0;
  std::size_t max_queries = 200;
  std::optional<std::size_t> jobs;
};

/// Relative DPI paths are resolved against `base_dir`. Throws ConfigError
/// naming the line for unknown keys and malformed values.
BenchConfig parse_bench_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Loads the listed DPIs (named by file stem) and appends generate_count
/// generated ones named gen<i>, the i-th drawn with seed
/// derive_seed(generate_seed, "gen/<i>").
FactorGrid make_grid(const BenchConfig& config);

}  // namespace diagseq
