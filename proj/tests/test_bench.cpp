#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "diagseq/bench.hpp"
#include "diagseq/config.hpp"
#include "diagseq/error.hpp"
#include "diagseq/rng.hpp"

using namespace diagseq;

namespace {

FactorGrid small_grid() {
  FactorGrid g;
  g.dpis.push_back({"pair", parse_dpi("[K]\nA\n(not A)\n[B]\n[P]\n[N]\n")});
  g.dpis.push_back({"chain", parse_dpi("[K]\nA\n(implies A B)\n(implies B C)\n(not C)\nD\n"
                                       "(implies D E)\n(not E)\n[B]\n[P]\n[N]\n")});
  g.measures = {MeasureKind::kEnt, MeasureKind::kSpl};
  g.dists = {DistributionKind::kEq, DistributionKind::kStr};
  g.prob_choices = 2;
  g.strategies = {OracleKind::kPlausible, OracleKind::kRandom};
  g.ld_values = {6};
  g.runs_per_cell = 4;
  g.master_seed = 17;
  return g;
}

}  // namespace

TEST_CASE("grid bookkeeping") {
  FactorGrid g;
  g.dpis.push_back({"pair", parse_dpi("[K]\nA\n(not A)\n[B]\n[P]\n[N]\n")});
  g.measures = {MeasureKind::kEnt, MeasureKind::kRnd};
  g.dists = {DistributionKind::kMod};
  g.prob_choices = 1;
  g.strategies = {OracleKind::kPlausible};
  g.ld_values = {10};
  g.runs_per_cell = 5;
  BenchResult r = run_grid(g);
  REQUIRE(r.runs.size() == 10);
  REQUIRE(r.cells.size() == 2);
  CHECK(r.cells[0].key.measure == MeasureKind::kEnt);
  CHECK(r.cells[1].key.measure == MeasureKind::kRnd);
  for (const ScenarioResult& c : r.cells) {
    CHECK(c.n_aborted == 0);
    CHECK(c.mean_q == 1.0);
    CHECK(c.min_q == 1.0);
    CHECK(c.max_q == 1.0);
    CHECK(c.n_runs == c.n_distinct_target);
    CHECK(c.n_runs >= 1);
    CHECK(c.n_runs <= 2);
  }
  for (const RunRecord& rec : r.runs) {
    CHECK(rec.seed == run_seed(0, rec.cell, rec.run));
    CHECK_FALSE(rec.wall_ms.has_value());
    CHECK((rec.target == "ax1" || rec.target == "ax2"));
  }
}

TEST_CASE("cell keys and seeds") {
  CellKey k{"d", MeasureKind::kKl, DistributionKind::kStr, 2, OracleKind::kImplausible, 14};
  CHECK(k.canonical() == "d|KL|STR|2|implausible|14");
  CHECK(run_seed(5, k, 3) == derive_seed(5, "d|KL|STR|2|implausible|14|3"));
  CellKey other = k;
  other.measure = MeasureKind::kEnt;
  CHECK(run_seed(5, k, 3) != run_seed(5, other, 3));
}

TEST_CASE("validation") {
  FactorGrid g = small_grid();
  g.measures.clear();
  CHECK_THROWS_AS(validate(g), ConfigError);
  g = small_grid();
  g.runs_per_cell = 0;
  CHECK_THROWS_AS(validate(g), ConfigError);
  g = small_grid();
  g.dpis[1].name = "pair";
  CHECK_THROWS_AS(validate(g), ConfigError);
  g = small_grid();
  g.dpis[0].name = "a,b";
  CHECK_THROWS_AS(validate(g), ConfigError);
  g = small_grid();
  g.ld_values = {1};
  CHECK_THROWS_AS(validate(g), ConfigError);
}

TEST_CASE("bench output does not depend on the worker count") {
  FactorGrid g = small_grid();
  std::string one = runs_csv(run_grid(g, {1, false}).runs);
  std::string four = runs_csv(run_grid(g, {4, false}).runs);
  CHECK(one == four);
  CHECK(runs_csv(run_grid(g, {1, false}).runs) == one);
  g.master_seed = 18;
  CHECK(runs_csv(run_grid(g, {1, false}).runs) != one);
}

TEST_CASE("distinct target counts run per cell") {
  BenchResult r = run_grid(small_grid());
  std::string cell;
  std::set<std::string> seen;
  for (const RunRecord& rec : r.runs) {
    if (rec.cell.canonical() != cell) {
      cell = rec.cell.canonical();
      seen.clear();
    }
    if (!rec.aborted) seen.insert(rec.target);
    CHECK(rec.n_distinct_target == seen.size());
  }
}

TEST_CASE("statistics skip duplicates and aborted runs") {
  CellKey k{"d", MeasureKind::kEnt, DistributionKind::kEq, 0, OracleKind::kPlausible, 6};
  std::vector<RunRecord> runs(5);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    runs[i].cell = k;
    runs[i].run = i;
  }
  runs[0].n_queries = 3, runs[0].target = "ax1";
  runs[1].n_queries = 5, runs[1].target = "ax2";
  runs[2].n_queries = 9, runs[2].target = "ax1";  // duplicate
  runs[3].n_queries = 200, runs[3].aborted = true;
  runs[4].n_queries = 4, runs[4].target = "ax3;ax4";
  auto cells = summarize_runs(runs);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].queries == std::vector<std::size_t>{3, 5, 4});
  CHECK(cells[0].n_aborted == 1);
  CHECK(cells[0].mean_q == doctest::Approx(4.0));
  CHECK(cells[0].min_q == 3.0);
  CHECK(cells[0].max_q == 5.0);

  auto other = runs;
  for (auto& r : other) r.cell.prob_choice = 1;
  other[0].n_queries = 8;
  runs.insert(runs.end(), other.begin(), other.end());
  auto pooled = pool_prob_choices(summarize_runs(runs));
  REQUIRE(pooled.size() == 1);
  CHECK(pooled[0].queries.size() == 6);
  CHECK(pooled[0].n_aborted == 2);
  CHECK(pooled[0].mean_q == doctest::Approx(29.0 / 6.0));
  CHECK(pooled[0].max_q == 8.0);
}

TEST_CASE("overhead, best set and CV") {
  CHECK(criticality_overhead({{MeasureKind::kEnt, 10.0}, {MeasureKind::kRnd, 25.0}}) ==
        doctest::Approx(150.0));
  CHECK(criticality_overhead({{MeasureKind::kEnt, 7.0}, {MeasureKind::kSpl, 7.0}}) == 0.0);
  CHECK_THROWS_AS(criticality_overhead({{MeasureKind::kEnt, 7.0}}), InsufficientData);
  CHECK_THROWS_AS(criticality_overhead({{MeasureKind::kEnt, 0.0}, {MeasureKind::kSpl, 1.0}}),
                  InsufficientData);

  BestSet s = best_qsm_set({{MeasureKind::kEnt, 10.0},
                            {MeasureKind::kSpl, 10.3},
                            {MeasureKind::kKl, 10.31},
                            {MeasureKind::kRnd, 20.0}});
  CHECK(s.members == std::vector<MeasureKind>{MeasureKind::kEnt, MeasureKind::kSpl});
  CHECK(s.best == std::vector<MeasureKind>{MeasureKind::kEnt});
  s = best_qsm_set({{MeasureKind::kEnt, 4.0}, {MeasureKind::kMps, 4.0}});
  CHECK(s.best.size() == 2);

  CHECK(scenario_cv({10.0, 20.0}) == doctest::Approx(47.14).epsilon(1e-3));
  CHECK(std::abs(scenario_cv({63.0, 59.0, 64.0, 62.0}) - 3.47) <= 0.05);
  CHECK_THROWS_AS(scenario_cv({1.0}), InsufficientData);
  CHECK_THROWS_AS(scenario_cv({1.0, -1.0}), ZeroMean);
}

TEST_CASE("runs CSV round trip") {
  BenchResult r = run_grid(small_grid(), {1, true});
  std::string csv = runs_csv(r.runs);
  auto back = parse_runs_csv(csv);
  REQUIRE(back.size() == r.runs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].cell == r.runs[i].cell);
    CHECK(back[i].seed == r.runs[i].seed);
    CHECK(back[i].target == r.runs[i].target);
    CHECK(back[i].wall_ms.has_value());
  }
  auto cells = summarize_runs(back);
  REQUIRE(cells.size() == r.cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].queries == r.cells[i].queries);
    CHECK(cells[i].mean_q == r.cells[i].mean_q);
  }
  CHECK(parse_runs_csv(csv.substr(0, csv.find('\n') + 1)).empty());
  CHECK_THROWS_AS(parse_runs_csv("dpi,measure\n"), ParseError);
  CHECK_THROWS_AS(parse_runs_csv(csv.substr(0, csv.find('\n') + 1) + "x,ENT,EQ,0\n"),
                  ParseError);
}

TEST_CASE("report lists best sets and overheads") {
  std::vector<PooledResult> pooled;
  auto add = [&](const char* dpi, MeasureKind m, double mean) {
    PooledResult p;
    p.key = ScenarioKey{dpi, m, DistributionKind::kStr, OracleKind::kPlausible, 10};
    p.queries = {static_cast<std::size_t>(mean)};
    p.mean_q = mean;
    pooled.push_back(p);
  };
  add("a", MeasureKind::kEnt, 10.0);
  add("a", MeasureKind::kRnd, 16.3);
  add("b", MeasureKind::kEnt, 20.0);
  add("b", MeasureKind::kSpl, 12.0);
  std::string md = report_markdown(pooled);
  CHECK(md.find("## ld = 10") != std::string::npos);
  CHECK(md.find("plausible/STR") != std::string::npos);
  CHECK(md.find("**ENT** (63%)") != std::string::npos);
  CHECK(md.find("**SPL** (67%)") != std::string::npos);
  CHECK(md.find("| CV |") != std::string::npos);
  CHECK(scenarios_csv(pool_prob_choices({})) ==
        "dpi,measure,dist,strategy,ld,mean_q,min_q,max_q,n_runs\n");
}

TEST_CASE("bench config parsing") {
  BenchConfig c = parse_bench_config(
      "# comment\n"
      "generate_count = 2\n"
      "generate_axioms = 12\n"
      "generate_conflicts = 2\n"
      "generate_min_size = 2\n"
      "generate_max_size = 3\n"
      "generate_overlap = false\n"
      "measures = ent, spl, rio\n"
      "dists = STR\n"
      "prob_choices = 1\n"
      "strategies = plausible\n"
      "ld = 6, 10\n"
      "runs = 3\n"
      "seed = 99  # trailing\n"
      "jobs = 2\n");
  CHECK(c.generate_count == 2);
  CHECK(c.generator.n_axioms == 12);
  CHECK_FALSE(c.generator.overlap);
  CHECK(c.measures ==
        std::vector<MeasureKind>{MeasureKind::kEnt, MeasureKind::kSpl, MeasureKind::kRio});
  CHECK(c.ld_values == std::vector<std::size_t>{6, 10});
  CHECK(c.seed == 99);
  CHECK(c.jobs == std::optional<std::size_t>{2});
  FactorGrid g = make_grid(c);
  REQUIRE(g.dpis.size() == 2);
  CHECK(g.dpis[0].name == "gen0");
  CHECK(g.dpis[0].dpi.knowledge.size() == 12);
  CHECK(g.runs_per_cell == 3);

  CHECK_THROWS_WITH_AS(parse_bench_config("runs = 3\nbogus = 1\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_bench_config("runs = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_bench_config("measures = foo\n"), ConfigError);
  CHECK_THROWS_AS(parse_bench_config("runs\n"), ConfigError);
}

TEST_CASE("bench config loads DPI files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "diagseq_config_test";
  fs::create_directories(dir);
  write_dpi_file(dir / "tiny.dpi", parse_dpi("[K]\nA\n(not A)\n[B]\n[P]\n[N]\n"));
  BenchConfig c = parse_bench_config("dpis = tiny.dpi\n", dir);
  FactorGrid g = make_grid(c);
  REQUIRE(g.dpis.size() == 1);
  CHECK(g.dpis[0].name == "tiny");
  CHECK_THROWS(make_grid(parse_bench_config("dpis = missing.dpi\n", dir)));
  fs::remove_all(dir);
}
