#include "diagseq/config.hpp"

#include <cctype>
#include <sstream>

#include "diagseq/error.hpp"
#include "diagseq/rng.hpp"

namespace diagseq {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> list_of(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t number(const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || value[0] == '-') {
    throw ConfigError("expected a non-negative integer, got '" + value + "'");
  }
  return v;
}

bool boolean(const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("expected true or false, got '" + value + "'");
}

}  // namespace

BenchConfig parse_bench_config(std::string_view text, const std::filesystem::path& base_dir) {
  BenchConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "dpis") {
        cfg.dpi_paths.clear();
        for (const auto& p : list_of(value)) {
          std::filesystem::path path(p);
          cfg.dpi_paths.push_back(path.is_relative() && !base_dir.empty() ? base_dir / path
                                                                           : path);
        }
      } else if (key == "generate_count") {
        cfg.generate_count = number(value);
      } else if (key == "generate_axioms") {
        cfg.generator.n_axioms = number(value);
      } else if (key == "generate_atoms") {
        cfg.generator.n_atoms = number(value);
      } else if (key == "generate_conflicts") {
        cfg.generator.n_conflicts = number(value);
      } else if (key == "generate_min_size") {
        cfg.generator.min_conflict_size = number(value);
      } else if (key == "generate_max_size") {
        cfg.generator.max_conflict_size = number(value);
      } else if (key == "generate_seed") {
        cfg.generator.seed = number(value);
      } else if (key == "generate_overlap") {
        cfg.generator.overlap = boolean(value);
      } else if (key == "measures") {
        cfg.measures.clear();
        for (const auto& m : list_of(value)) cfg.measures.push_back(parse_measure(m));
      } else if (key == "dists") {
        cfg.dists.clear();
        for (const auto& d : list_of(value)) cfg.dists.push_back(parse_distribution_kind(d));
      } else if (key == "prob_choices") {
        cfg.prob_choices = number(value);
      } else if (key == "strategies") {
        cfg.strategies.clear();
        for (const auto& s : list_of(value)) cfg.strategies.push_back(parse_oracle_kind(s));
      } else if (key == "ld") {
        cfg.ld_values.clear();
        for (const auto& v : list_of(value)) cfg.ld_values.push_back(number(v));
      } else if (key == "runs") {
        cfg.runs = number(value);
      } else if (key == "seed") {
        cfg.seed = number(value);
      } else if (key == "max_queries") {
        cfg.max_queries = number(value);
      } else if (key == "jobs") {
        cfg.jobs = number(value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

FactorGrid make_grid(const BenchConfig& config) {
  FactorGrid grid;
  for (const auto& path : config.dpi_paths) {
    grid.dpis.push_back(NamedDpi{path.stem().string(), read_dpi_file(path)});
  }
  for (std::size_t i = 0; i < config.generate_count; ++i) {
    GeneratorParams params = config.generator;
    params.seed = derive_seed(config.generator.seed, "gen/" + std::to_string(i));
    grid.dpis.push_back(NamedDpi{"gen" + std::to_string(i), generate_dpi(params).dpi});
  }
  grid.measures = config.measures;
  grid.dists = config.dists;
  grid.prob_choices = config.prob_choices;
  grid.strategies = config.strategies;
  grid.ld_values = config.ld_values;
  grid.runs_per_cell = config.runs;
  grid.master_seed = config.seed;
  grid.max_queries = config.max_queries;
  validate(grid);
  return grid;
}

}  // namespace diagseq
