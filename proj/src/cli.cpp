#include "diagseq/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "diagseq/bench.hpp"
#include "diagseq/config.hpp"
#include "diagseq/error.hpp"
#include "diagseq/generator.hpp"
#include "diagseq/rng.hpp"
#include "diagseq/session.hpp"

namespace diagseq {

namespace fs = std::filesystem;

namespace {

struct GenArgs {
  GeneratorParams params;
  std::size_t count = 1;
  bool no_overlap = false;
  bool plain_syntax = false;
  std::string out = ".";
};

struct SessionArgs {
  std::string dpi;
  std::string measure = "ent";
  std::string dist = "eq";
  std::string oracle = "plausible";
  std::size_t ld = 10;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> prob_seed;
  std::size_t max_queries = 200;
  bool trace = false;
};

struct BenchArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  bool timing = false;
};

struct ReportArgs {
  std::string runs;
  std::string out = ".";
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

int run_gen(const GenArgs& a, std::ostream& out) {
  ensure_dir(a.out);
  GeneratorParams params = a.params;
  params.overlap = !a.no_overlap;
  params.vary_syntax = !a.plain_syntax;
  std::string manifest =
      "file,n_axioms,n_atoms,n_conflicts,min_size,max_size,overlap,seed,planted\n";
  for (std::size_t i = 0; i < a.count; ++i) {
    GeneratorParams p = params;
    p.seed = a.count == 1 ? params.seed : derive_seed(params.seed, "gen/" + std::to_string(i));
    GeneratedDpi g = generate_dpi(p);
    std::string file = "gen" + std::to_string(i) + ".dpi";
    write_dpi_file(fs::path(a.out) / file, g.dpi);
    std::string planted;
    for (const Conflict& c : g.planted_conflicts) {
      if (!planted.empty()) planted += ' ';
      planted += join_labels(g.dpi, Diagnosis{c.axioms});
    }
    manifest += file + ',' + std::to_string(p.n_axioms) + ',' + std::to_string(p.n_atoms) + ',' +
                std::to_string(p.n_conflicts) + ',' + std::to_string(p.min_conflict_size) + ',' +
                std::to_string(p.max_conflict_size) + ',' + (p.overlap ? "1" : "0") + ',' +
                std::to_string(p.seed) + ',' + planted + '\n';
    out << "wrote " << (fs::path(a.out) / file).string() << '\n';
  }
  write_text_file(fs::path(a.out) / "manifest.csv", manifest);
  return 0;
}

int run_single_session(const SessionArgs& a, std::ostream& out) {
  SessionConfig config;
  config.measure = parse_measure(a.measure);
  config.strategy = parse_oracle_kind(a.oracle);
  DistributionKind kind = parse_distribution_kind(a.dist);
  config.ld = a.ld;

  Dpi dpi = read_dpi_file(a.dpi);
  std::uint64_t prob_seed = a.prob_seed.value_or(derive_seed(a.seed, "fault-model"));
  FaultModel model = make_fault_model(dpi, DistributionSpec::standard(kind, prob_seed));
  config.max_queries = a.max_queries;
  config.seed = a.seed;
  config.trace = a.trace;
  SessionResult r = run_session(dpi, model, config);

  out << "queries: " << r.n_queries << '\n';
  out << "aborted: " << (r.aborted ? "yes" : "no") << '\n';
  out << "target: " << (r.aborted ? std::string("-") : "{" + join_labels(dpi, r.target) + "}")
      << '\n';
  out << "answers:";
  for (const auto& [id, ans] : r.answers) out << ' ' << id << '=' << to_string(ans);
  out << '\n';
  if (a.trace) {
    out << "step,query_id,x,answer,leading,eliminated\n";
    for (const TraceRecord& t : r.trace) out << format_trace_record(t) << '\n';
  }
  return 0;
}

std::optional<std::size_t> env_jobs() {
  const char* v = std::getenv("DIAGSEQ_JOBS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n == 0) throw ConfigError(std::string("bad DIAGSEQ_JOBS value '") + v + "'");
  return n;
}

void write_summaries(const fs::path& dir, const std::vector<ScenarioResult>& cells) {
  std::vector<PooledResult> pooled = pool_prob_choices(cells);
  write_text_file(dir / "scenarios.csv", scenarios_csv(pooled));
  write_text_file(dir / "report.md", report_markdown(pooled));
}

int run_bench(const BenchArgs& a, std::ostream& out) {
  fs::path config_path(a.config);
  BenchConfig cfg = parse_bench_config(read_text_file(config_path), config_path.parent_path());
  if (a.seed) cfg.seed = *a.seed;
  if (a.runs) cfg.runs = *a.runs;
  FactorGrid grid = make_grid(cfg);

  BenchOptions options;
  options.jobs = a.jobs ? *a.jobs : env_jobs().value_or(cfg.jobs.value_or(1));
  options.record_wall_time = a.timing;
  BenchResult result = run_grid(grid, options);

  ensure_dir(a.out);
  fs::path dir(a.out);
  write_text_file(dir / "runs.csv", runs_csv(result.runs));
  write_summaries(dir, result.cells);
  std::size_t aborted = 0;
  for (const RunRecord& r : result.runs) aborted += r.aborted ? 1 : 0;
  out << "sessions: " << result.runs.size() << ", aborted: " << aborted << '\n';
  out << "wrote " << (dir / "runs.csv").string() << ", " << (dir / "scenarios.csv").string()
      << ", " << (dir / "report.md").string() << '\n';
  return 0;
}

int run_report(const ReportArgs& a, std::ostream& out) {
  std::vector<RunRecord> runs = parse_runs_csv(read_text_file(a.runs));
  ensure_dir(a.out);
  write_summaries(a.out, summarize_runs(runs));
  out << "wrote " << (fs::path(a.out) / "scenarios.csv").string() << ", "
      << (fs::path(a.out) / "report.md").string() << '\n';
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential diagnosis with query selection measures", "diagseq"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate random DPIs with planted conflicts");
  gen_cmd->add_option("--axioms", gen.params.n_axioms, "Axioms in K")->capture_default_str();
  gen_cmd->add_option("--atoms", gen.params.n_atoms, "Filler vocabulary size")
      ->capture_default_str();
  gen_cmd->add_option("--conflicts", gen.params.n_conflicts, "Planted conflicts")
      ->capture_default_str();
  gen_cmd->add_option("--min-size", gen.params.min_conflict_size, "Smallest conflict")
      ->capture_default_str();
  gen_cmd->add_option("--max-size", gen.params.max_conflict_size, "Largest conflict")
      ->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "Number of DPIs")->capture_default_str();
  gen_cmd->add_option("--seed", gen.params.seed, "Seed")->capture_default_str();
  gen_cmd->add_flag("--no-overlap", gen.no_overlap, "Keep planted conflicts disjoint");
  gen_cmd->add_flag("--plain-syntax", gen.plain_syntax, "One spelling per axiom shape");
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

  SessionArgs ses;
  CLI::App* ses_cmd = app.add_subcommand("session", "Run one sequential diagnosis session");
  ses_cmd->add_option("--dpi", ses.dpi, "DPI file")->required();
  ses_cmd->add_option("--measure", ses.measure, "ent|spl|kl|emcb|mps|bme|rio|rnd")
      ->capture_default_str();
  ses_cmd->add_option("--dist", ses.dist, "eq|mod|str")->capture_default_str();
  ses_cmd->add_option("--oracle", ses.oracle, "plausible|random|implausible")
      ->capture_default_str();
  ses_cmd->add_option("--ld", ses.ld, "Leading diagnoses per iteration")->capture_default_str();
  ses_cmd->add_option("--seed", ses.seed, "Session seed")->capture_default_str();
  ses_cmd->add_option("--prob-seed", ses.prob_seed, "Fault model seed (derived from --seed)");
  ses_cmd->add_option("--max-queries", ses.max_queries, "Query cap")->capture_default_str();
  ses_cmd->add_flag("--trace", ses.trace, "Print one line per query");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a factorial benchmark grid");
  bench_cmd->add_option("--config", bench.config, "Grid config file")->required();
  bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads (default $DIAGSEQ_JOBS)");
  bench_cmd->add_option("--seed", bench.seed, "Override the master seed");
  bench_cmd->add_option("--runs", bench.runs, "Override runs per cell");
  bench_cmd->add_flag("--timing", bench.timing, "Record wall_ms per run");

  ReportArgs rep;
  CLI::App* rep_cmd = app.add_subcommand("report", "Summarize an existing runs CSV");
  rep_cmd->add_option("--runs", rep.runs, "runs.csv from bench")->required();
  rep_cmd->add_option("--out", rep.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (e.get_exit_code() != 0) return 1;
    return 0;
  }

  try {
    if (*gen_cmd) return run_gen(gen, out);
    if (*ses_cmd) return run_single_session(ses, out);
    if (*bench_cmd) return run_bench(bench, out);
    if (*rep_cmd) return run_report(rep, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace diagseq
