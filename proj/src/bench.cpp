#include "diagseq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "diagseq/error.hpp"
#include "diagseq/generator.hpp"
#include "diagseq/rng.hpp"
#include "diagseq/session.hpp"

namespace diagseq {

void validate(const FactorGrid& grid) {
  if (grid.dpis.empty()) throw ConfigError("grid has no DPIs");
  if (grid.measures.empty()) throw ConfigError("grid has no measures");
  if (grid.dists.empty()) throw ConfigError("grid has no distributions");
  if (grid.strategies.empty()) throw ConfigError("grid has no oracle strategies");
  if (grid.ld_values.empty()) throw ConfigError("grid has no ld values");
  if (grid.prob_choices == 0) throw ConfigError("prob_choices must be positive");
  if (grid.runs_per_cell == 0) throw ConfigError("runs must be positive");
  if (grid.max_queries == 0) throw ConfigError("max_queries must be positive");
  std::set<std::string> names;
  for (const auto& d : grid.dpis) {
    if (d.name.empty() || d.name.find_first_of(",|\n") != std::string::npos) {
      throw ConfigError("bad DPI name '" + d.name + "'");
    }
    if (!names.insert(d.name).second) throw ConfigError("duplicate DPI name '" + d.name + "'");
  }
  for (std::size_t ld : grid.ld_values) {
    if (ld < 2) throw ConfigError("ld values must be at least 2");
  }
}

std::string CellKey::canonical() const {
  return dpi + '|' + to_string(measure) + '|' + to_string(dist) + '|' +
         std::to_string(prob_choice) + '|' + to_string(strategy) + '|' + std::to_string(ld);
}

std::uint64_t run_seed(std::uint64_t master_seed, const CellKey& cell, std::size_t run) {
  return derive_seed(master_seed, cell.canonical() + '|' + std::to_string(run));
}

namespace {

// Marks duplicates and fills the running distinct-target count, cell by cell.
void number_distinct_targets(std::vector<RunRecord>& runs) {
  std::map<std::string, std::set<std::string>> seen;
  for (RunRecord& r : runs) {
    auto& targets = seen[r.cell.canonical()];
    if (!r.aborted) targets.insert(r.target);
    r.n_distinct_target = targets.size();
  }
}

}  // namespace

BenchResult run_grid(const FactorGrid& grid, const BenchOptions& options) {
  validate(grid);

  // Fault models depend only on (dpi, dist, choice), so every measure and
  // strategy sees the same probability choices.
  std::vector<std::vector<FaultModel>> models;
  for (const auto& d : grid.dpis) {
    models.push_back(instantiate_fault_models(d.dpi, grid.dists, grid.prob_choices,
                                              derive_seed(grid.master_seed, "dpi/" + d.name)));
  }

  struct Task {
    std::size_t dpi;
    std::size_t model;
    CellKey cell;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (std::size_t di = 0; di < grid.dpis.size(); ++di) {
    for (MeasureKind m : grid.measures) {
      for (std::size_t ki = 0; ki < grid.dists.size(); ++ki) {
        for (std::size_t c = 0; c < grid.prob_choices; ++c) {
          for (OracleKind s : grid.strategies) {
            for (std::size_t ld : grid.ld_values) {
              CellKey key{grid.dpis[di].name, m, grid.dists[ki], c, s, ld};
              for (std::size_t r = 0; r < grid.runs_per_cell; ++r) {
                tasks.push_back(Task{di, ki * grid.prob_choices + c, key, r});
              }
            }
          }
        }
      }
    }
  }

  std::vector<RunRecord> runs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      RunRecord& rec = runs[i];
      rec.cell = t.cell;
      rec.run = t.run;
      rec.seed = run_seed(grid.master_seed, t.cell, t.run);
      SessionConfig config;
      config.measure = t.cell.measure;
      config.ld = t.cell.ld;
      config.strategy = t.cell.strategy;
      config.max_queries = grid.max_queries;
      config.seed = rec.seed;
      config.engine = grid.engine;
      try {
        const Dpi& dpi = grid.dpis[t.dpi].dpi;
        SessionResult res = run_session(dpi, models[t.dpi][t.model], config);
        rec.n_queries = res.n_queries;
        rec.aborted = res.aborted;
        if (!res.aborted) rec.target = join_labels(dpi, res.target);
        if (options.record_wall_time) {
          rec.wall_ms = std::chrono::duration<double, std::milli>(res.wall_time).count();
        }
      } catch (const Error& e) {
        rec.aborted = true;
        rec.error = e.what();
      }
    }
  };

  std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, tasks.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  number_distinct_targets(runs);
  BenchResult out;
  out.cells = summarize_runs(runs);
  out.runs = std::move(runs);
  return out;
}

namespace {

template <typename Result>
void fill_stats(Result& r) {
  if (r.queries.empty()) return;
  double sum = 0.0;
  for (std::size_t q : r.queries) sum += static_cast<double>(q);
  r.mean_q = sum / static_cast<double>(r.queries.size());
  r.min_q = static_cast<double>(*std::min_element(r.queries.begin(), r.queries.end()));
  r.max_q = static_cast<double>(*std::max_element(r.queries.begin(), r.queries.end()));
}

}  // namespace

std::vector<ScenarioResult> summarize_runs(const std::vector<RunRecord>& runs) {
  std::vector<ScenarioResult> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::set<std::string>> seen;
  for (const RunRecord& r : runs) {
    std::string key = r.cell.canonical();
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      out.push_back(ScenarioResult{});
      out.back().key = r.cell;
    }
    ScenarioResult& cell = out[it->second];
    if (r.aborted) {
      ++cell.n_aborted;
      continue;
    }
    if (!seen[key].insert(r.target).second) continue;
    cell.queries.push_back(r.n_queries);
  }
  for (ScenarioResult& cell : out) {
    cell.n_runs = cell.queries.size();
    cell.n_distinct_target = cell.queries.size();
    fill_stats(cell);
  }
  return out;
}

std::vector<PooledResult> pool_prob_choices(const std::vector<ScenarioResult>& cells) {
  std::vector<PooledResult> out;
  for (const ScenarioResult& c : cells) {
    ScenarioKey key{c.key.dpi, c.key.measure, c.key.dist, c.key.strategy, c.key.ld};
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const PooledResult& p) { return p.key == key; });
    if (it == out.end()) {
      out.push_back(PooledResult{key, {}, 0, 0.0, 0.0, 0.0});
      it = std::prev(out.end());
    }
    it->queries.insert(it->queries.end(), c.queries.begin(), c.queries.end());
    it->n_aborted += c.n_aborted;
  }
  for (PooledResult& p : out) fill_stats(p);
  return out;
}

double criticality_overhead(const std::map<MeasureKind, double>& cell_means) {
  if (cell_means.size() < 2) throw InsufficientData("overhead needs at least two measures");
  double best = cell_means.begin()->second;
  double worst = best;
  for (const auto& [m, v] : cell_means) {
    best = std::min(best, v);
    worst = std::max(worst, v);
  }
  if (!(best > 0.0)) throw InsufficientData("best mean is zero");
  return (worst / best - 1.0) * 100.0;
}

BestSet best_qsm_set(const std::map<MeasureKind, double>& cell_means, double slack) {
  BestSet out;
  if (cell_means.empty()) return out;
  double best = cell_means.begin()->second;
  for (const auto& [m, v] : cell_means) best = std::min(best, v);
  for (const auto& [m, v] : cell_means) {
    if (v <= (1.0 + slack) * best) out.members.push_back(m);
    if (v == best) out.best.push_back(m);
  }
  return out;
}

double scenario_cv(const std::vector<double>& values) {
  if (values.size() < 2) throw InsufficientData("CV needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (mean == 0.0) throw ZeroMean("CV of values with zero mean");
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return sd / mean * 100.0;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(0, line, "expected an unsigned integer, got '" + s + "'");
  }
}

constexpr const char* kRunsHeader =
    "dpi,measure,dist,prob_choice,strategy,ld,run,seed,n_queries,n_distinct_target,aborted,"
    "wall_ms,target";

}  // namespace

std::string runs_csv(const std::vector<RunRecord>& runs) {
  std::string out = kRunsHeader;
  out += '\n';
  for (const RunRecord& r : runs) {
    out += r.cell.dpi + ',' + to_string(r.cell.measure) + ',' + to_string(r.cell.dist) + ',' +
           std::to_string(r.cell.prob_choice) + ',' + to_string(r.cell.strategy) + ',' +
           std::to_string(r.cell.ld) + ',' + std::to_string(r.run) + ',' +
           std::to_string(r.seed) + ',' + std::to_string(r.n_queries) + ',' +
           std::to_string(r.n_distinct_target) + ',' + (r.aborted ? "1" : "0") + ',' +
           (r.wall_ms ? fmt("%.3f", *r.wall_ms) : std::string()) + ',' + r.target + '\n';
  }
  return out;
}

std::vector<RunRecord> parse_runs_csv(std::string_view text) {
  std::vector<RunRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kRunsHeader) throw ParseError(0, 1, "unexpected runs CSV header");
      continue;
    }
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 13) throw ParseError(0, line_no, "expected 13 fields");
    RunRecord r;
    try {
      r.cell.dpi = f[0];
      r.cell.measure = parse_measure(f[1]);
      r.cell.dist = parse_distribution_kind(f[2]);
      r.cell.prob_choice = parse_u64(f[3], line_no);
      r.cell.strategy = parse_oracle_kind(f[4]);
    } catch (const ConfigError& e) {
      throw ParseError(0, line_no, e.what());
    }
    r.cell.ld = parse_u64(f[5], line_no);
    r.run = parse_u64(f[6], line_no);
    r.seed = parse_u64(f[7], line_no);
    r.n_queries = parse_u64(f[8], line_no);
    r.n_distinct_target = parse_u64(f[9], line_no);
    r.aborted = parse_u64(f[10], line_no) != 0;
    if (!f[11].empty()) r.wall_ms = std::strtod(f[11].c_str(), nullptr);
    r.target = f[12];
    out.push_back(std::move(r));
  }
  return out;
}

std::string scenarios_csv(const std::vector<PooledResult>& pooled) {
  std::string out = "dpi,measure,dist,strategy,ld,mean_q,min_q,max_q,n_runs\n";
  for (const PooledResult& p : pooled) {
    out += p.key.dpi + ',' + to_string(p.key.measure) + ',' + to_string(p.key.dist) + ',' +
           to_string(p.key.strategy) + ',' + std::to_string(p.key.ld) + ',' +
           fmt("%.17g", p.mean_q) + ',' + fmt("%.17g", p.min_q) + ',' + fmt("%.17g", p.max_q) +
           ',' + std::to_string(p.queries.size()) + '\n';
  }
  return out;
}

std::string report_markdown(const std::vector<PooledResult>& pooled) {
  std::vector<std::size_t> lds;
  std::vector<std::string> dpis;
  std::vector<std::pair<OracleKind, DistributionKind>> columns;
  auto add_unique = [](auto& v, const auto& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const PooledResult& p : pooled) {
    add_unique(lds, p.key.ld);
    add_unique(dpis, p.key.dpi);
    add_unique(columns, std::pair{p.key.strategy, p.key.dist});
  }
  std::sort(columns.begin(), columns.end());

  std::string out = "# QSM criticality\n";
  for (std::size_t ld : lds) {
    out += "\n## ld = " + std::to_string(ld) + "\n\n| DPI |";
    for (auto [s, d] : columns) out += ' ' + to_string(s) + '/' + to_string(d) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) out += "---|";
    out += '\n';

    std::vector<std::vector<double>> column_overheads(columns.size());
    for (const std::string& dpi : dpis) {
      out += "| " + dpi + " |";
      for (std::size_t ci = 0; ci < columns.size(); ++ci) {
        std::map<MeasureKind, double> means;
        for (const PooledResult& p : pooled) {
          if (p.key.dpi == dpi && p.key.ld == ld && p.key.strategy == columns[ci].first &&
              p.key.dist == columns[ci].second && !p.queries.empty()) {
            means[p.key.measure] = p.mean_q;
          }
        }
        if (means.empty()) {
          out += " - |";
          continue;
        }
        BestSet set = best_qsm_set(means);
        std::string cell;
        for (MeasureKind m : set.members) {
          if (!cell.empty()) cell += ", ";
          bool strict = std::find(set.best.begin(), set.best.end(), m) != set.best.end();
          cell += strict ? "**" + to_string(m) + "**" : to_string(m);
        }
        try {
          double o = criticality_overhead(means);
          column_overheads[ci].push_back(o);
          cell += " (" + fmt("%.0f", o) + "%)";
        } catch (const InsufficientData&) {
        }
        out += ' ' + cell + " |";
      }
      out += '\n';
    }
    out += "| CV |";
    for (const auto& values : column_overheads) {
      try {
        out += ' ' + fmt("%.1f", scenario_cv(values)) + "% |";
      } catch (const Error&) {
        out += " n/a |";
      }
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace diagseq
