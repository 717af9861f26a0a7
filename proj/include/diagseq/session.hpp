#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diagseq/diagnosis.hpp"
#include "diagseq/dpi.hpp"
#include "diagseq/oracle.hpp"
#include "diagseq/prob_model.hpp"
#include "diagseq/qsm.hpp"
#include "diagseq/query.hpp"

namespace diagseq {

struct SessionConfig {
  MeasureKind measure = MeasureKind::kEnt;
  std::size_t ld = 10;
  OracleKind strategy = OracleKind::kPlausible;
  std::size_t max_queries = 200;
  std::uint64_t seed = 0;
  bool trace = false;
  bool probe_fast_path = true;
  EngineOptions engine;
};

struct TraceRecord {
  std::size_t step = 0;
  std::string query_id;
  double x = 0.0;  // estimated probability of a positive answer
  Answer answer = Answer::kPositive;
  std::size_t leading_size = 0;
  std::size_t eliminated = 0;
};

/// `step,query_id,x,answer,leading,eliminated` with x at 17 digits.
std::string format_trace_record(const TraceRecord& r);

struct SessionResult {
  std::size_t n_queries = 0;
  Diagnosis target;  // empty when aborted
  std::vector<std::pair<std::string, Answer>> answers;
  std::vector<TraceRecord> trace;  // filled only when config.trace is set
  std::chrono::nanoseconds wall_time{0};
  bool aborted = false;
};

/// Runs the sequential diagnosis loop until the measurements leave a single
/// minimal diagnosis, or until max_queries answers did not achieve that
/// (aborted). Oracle and RND draws come from two streams derived from
/// config.seed, so switching the measure leaves the oracle stream intact.
/// Throws Unsolvable and ResourceLimit.
SessionResult run_session(const Dpi& dpi, const FaultModel& model, const SessionConfig& config);

}  // namespace diagseq
