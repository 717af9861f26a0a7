#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diagseq/diagnosis.hpp"
#include "diagseq/dpi.hpp"
#include "diagseq/oracle.hpp"
#include "diagseq/prob_model.hpp"
#include "diagseq/qsm.hpp"

namespace diagseq {

struct NamedDpi {
  std::string name;
  Dpi dpi;
};

struct FactorGrid {
  std::vector<NamedDpi> dpis;
  std::vector<MeasureKind> measures;
  std::vector<DistributionKind> dists;
  std::size_t prob_choices = 3;
  std::vector<OracleKind> strategies;
  std::vector<std::size_t> ld_values{6, 10, 14};
  std::size_t runs_per_cell = 20;
  std::uint64_t master_seed = 0;
  std::size_t max_queries = 200;
  EngineOptions engine;
};

/// Throws ConfigError for empty factor lists or zero counts.
void validate(const FactorGrid& grid);

struct CellKey {
  std::string dpi;
  MeasureKind measure = MeasureKind::kEnt;
  DistributionKind dist = DistributionKind::kEq;
  std::size_t prob_choice = 0;
  OracleKind strategy = OracleKind::kPlausible;
  std::size_t ld = 10;

  /// "dpi|measure|dist|prob_choice|strategy|ld", the input to seed derivation.
  std::string canonical() const;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

/// derive_seed(master_seed, canonical + "|" + run).
std::uint64_t run_seed(std::uint64_t master_seed, const CellKey& cell, std::size_t run);

struct RunRecord {
  CellKey cell;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t n_queries = 0;
  /// Distinct targets among the non-aborted runs of the cell up to and
  /// including this one.
  std::size_t n_distinct_target = 0;
  bool aborted = false;
  std::optional<double> wall_ms;
  std::string target;  // labels joined by ';'
  std::string error;   // set when the session threw; not written to CSV
};

/// Statistics of one cell, over deduplicated non-aborted runs.
struct ScenarioResult {
  CellKey key;
  std::vector<std::size_t> queries;
  std::size_t n_runs = 0;
  std::size_t n_distinct_target = 0;
  std::size_t n_aborted = 0;
  double mean_q = 0.0;
  double min_q = 0.0;
  double max_q = 0.0;
};

/// A cell with the probability choice pooled away.
struct ScenarioKey {
  std::string dpi;
  MeasureKind measure = MeasureKind::kEnt;
  DistributionKind dist = DistributionKind::kEq;
  OracleKind strategy = OracleKind::kPlausible;
  std::size_t ld = 10;

  friend bool operator==(const ScenarioKey&, const ScenarioKey&) = default;
};

struct PooledResult {
  ScenarioKey key;
  std::vector<std::size_t> queries;
  std::size_t n_aborted = 0;
  double mean_q = 0.0;
  double min_q = 0.0;
  double max_q = 0.0;
};

struct BenchOptions {
  std::size_t jobs = 1;
  bool record_wall_time = false;
};

struct BenchResult {
  std::vector<RunRecord> runs;         // grid order, then run index
  std::vector<ScenarioResult> cells;   // grid order
};

/// Runs every cell of the grid. Session failures mark the run aborted and
/// never stop the grid. Output is independent of `jobs`.
BenchResult run_grid(const FactorGrid& grid, const BenchOptions& options = {});

/// Groups runs by cell (first-appearance order) and computes statistics.
std::vector<ScenarioResult> summarize_runs(const std::vector<RunRecord>& runs);

/// Pools cells that differ only in prob_choice, in first-appearance order.
std::vector<PooledResult> pool_prob_choices(const std::vector<ScenarioResult>& cells);

/// (worst / best - 1) * 100 over the measures' mean query counts.
/// Throws InsufficientData with fewer than two means or a zero best mean.
double criticality_overhead(const std::map<MeasureKind, double>& cell_means);

struct BestSet {
  std::vector<MeasureKind> members;  // mean <= (1 + slack) * best, in measure order
  std::vector<MeasureKind> best;     // the minimizers
};

BestSet best_qsm_set(const std::map<MeasureKind, double>& cell_means, double slack = 0.03);

/// Sample standard deviation over mean, times 100. Throws InsufficientData
/// with fewer than two values and ZeroMean.
double scenario_cv(const std::vector<double>& values);

std::string runs_csv(const std::vector<RunRecord>& runs);
std::vector<RunRecord> parse_runs_csv(std::string_view text);
std::string scenarios_csv(const std::vector<PooledResult>& pooled);
/// Markdown: per ld, the criticality matrix (rows = DPIs, columns =
/// strategy x dist) listing best sets with the minimizers in bold, the
/// overhead per entry, and a CV line per column.
std::string report_markdown(const std::vector<PooledResult>& pooled);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace diagseq
