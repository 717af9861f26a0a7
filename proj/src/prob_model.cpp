#include "diagseq/prob_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "diagseq/error.hpp"
#include "diagseq/rng.hpp"

namespace diagseq {

double clamp_probability(double p) {
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kEq: return "EQ";
    case DistributionKind::kMod: return "MOD";
    case DistributionKind::kStr: return "STR";
  }
  return "?";
}

DistributionKind parse_distribution_kind(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "EQ") return DistributionKind::kEq;
  if (upper == "MOD") return DistributionKind::kMod;
  if (upper == "STR") return DistributionKind::kStr;
  throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

DistributionSpec DistributionSpec::standard(DistributionKind kind, std::uint64_t seed) {
  double lambda = 0.0;
  if (kind == DistributionKind::kMod) lambda = 0.5;
  if (kind == DistributionKind::kStr) lambda = 1.75;
  return DistributionSpec{kind, lambda, seed};
}

namespace {

void count_into(const Formula& f, SubComponentCounts& out) {
  switch (f.kind()) {
    case FormulaKind::kAtom: ++out["ATOM"]; break;
    case FormulaKind::kTrue:
    case FormulaKind::kFalse: break;
    case FormulaKind::kNot: ++out["NOT"]; break;
    case FormulaKind::kAnd: ++out["AND"]; break;
    case FormulaKind::kOr: ++out["OR"]; break;
    case FormulaKind::kImplies: ++out["IMPLIES"]; break;
    case FormulaKind::kIff: ++out["IFF"]; break;
  }
  for (const Formula& c : f.children()) count_into(c, out);
}

}  // namespace

SubComponentCounts count_subcomponents(const Formula& f) {
  SubComponentCounts out;
  count_into(f, out);
  return out;
}

std::map<std::string, SubComponentCounts> extract_subcomponents(const SentenceSet& k) {
  std::map<std::string, SubComponentCounts> out;
  for (const auto& s : k) out[s.label] = count_subcomponents(s.formula);
  return out;
}

std::map<std::string, double> generate_distribution(const DistributionSpec& spec,
                                                    std::span<const std::string> kinds) {
  std::vector<std::string> sorted(kinds.begin(), kinds.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) throw Error("distribution needs at least one sub-component kind");

  Rng rng(spec.seed);
  std::map<std::string, double> out;
  if (spec.kind == DistributionKind::kEq) {
    double r = clamp_probability(rng.uniform());
    for (const auto& k : sorted) out[k] = r;
    return out;
  }
  if (!(spec.lambda > 0.0)) throw Error("lambda must be positive");
  std::vector<int> rank(sorted.size());
  std::iota(rank.begin(), rank.end(), 1);
  rng.shuffle(rank);
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    double x = rng.uniform(rank[j] - 0.5, rank[j] + 0.5);
    out[sorted[j]] = spec.lambda * std::exp(-spec.lambda * x);
  }
  return out;
}

double axiom_fault_prob(const SubComponentCounts& occurrences,
                        const std::map<std::string, double>& sc_probs) {
  double healthy = 1.0;
  for (const auto& [kind, count] : occurrences) {
    auto it = sc_probs.find(kind);
    if (it == sc_probs.end()) {
      throw MissingSubComponent("no probability for sub-component '" + kind + "'");
    }
    for (int i = 0; i < count; ++i) healthy *= 1.0 - it->second;
  }
  return clamp_probability(1.0 - healthy);
}

FaultModel make_fault_model(const Dpi& dpi, const DistributionSpec& spec) {
  auto per_axiom = extract_subcomponents(dpi.knowledge);
  std::vector<std::string> kinds;
  for (const auto& [label, counts] : per_axiom) {
    for (const auto& [kind, n] : counts) kinds.push_back(kind);
  }
  if (kinds.empty()) kinds.push_back("ATOM");
  FaultModel model;
  model.spec = spec;
  model.sc_probs = generate_distribution(spec, kinds);
  for (auto& [kind, p] : model.sc_probs) p = clamp_probability(p);
  for (const auto& [label, counts] : per_axiom) {
    model.ax_probs[label] = axiom_fault_prob(counts, model.sc_probs);
  }
  return model;
}

std::vector<double> axiom_probabilities(const FaultModel& model, const Dpi& dpi) {
  std::vector<double> out;
  out.reserve(dpi.knowledge.size());
  for (const auto& s : dpi.knowledge) {
    auto it = model.ax_probs.find(s.label);
    if (it == model.ax_probs.end()) {
      throw UnknownLabel("fault model has no probability for '" + s.label + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

double diagnosis_prior(const Diagnosis& d, std::span<const double> axiom_probs) {
  std::vector<char> faulty(axiom_probs.size(), 0);
  for (std::size_t i : d.axioms) {
    if (i >= axiom_probs.size()) {
      throw UnknownLabel("axiom index " + std::to_string(i) + " outside K");
    }
    faulty[i] = 1;
  }
  std::vector<double> factors(axiom_probs.size());
  for (std::size_t i = 0; i < axiom_probs.size(); ++i) {
    factors[i] = faulty[i] ? axiom_probs[i] : 1.0 - axiom_probs[i];
  }
  std::sort(factors.begin(), factors.end());
  double p = 1.0;
  for (double f : factors) p *= f;
  return p;
}

DiagnosisBelief normalize(DiagnosisBelief beliefs) {
  double total = 0.0;
  for (const auto& e : beliefs.entries) total += e.probability;
  if (!(total > 0.0)) throw ZeroMass("beliefs carry no probability mass");
  for (auto& e : beliefs.entries) e.probability /= total;
  beliefs.normalized = true;
  return beliefs;
}

double answer_likelihood(PartitionBlock block, Answer answer) {
  if (block == PartitionBlock::kZero) return 0.5;
  bool agrees = (block == PartitionBlock::kPlus) == (answer == Answer::kPositive);
  return agrees ? 1.0 : 0.0;
}

DiagnosisBelief bayes_update(const DiagnosisBelief& beliefs, const QPartition& qp,
                             Answer answer) {
  const std::size_t n = beliefs.entries.size();
  std::vector<int> seen(n, 0);
  std::vector<PartitionBlock> block(n);
  auto mark = [&](const std::vector<std::size_t>& members, PartitionBlock b) {
    for (std::size_t i : members) {
      if (i >= n) throw InvalidPartition("q-partition refers to an untracked diagnosis");
      ++seen[i];
      block[i] = b;
    }
  };
  mark(qp.d_plus, PartitionBlock::kPlus);
  mark(qp.d_minus, PartitionBlock::kMinus);
  mark(qp.d_zero, PartitionBlock::kZero);
  for (int s : seen) {
    if (s != 1) throw InvalidPartition("q-partition blocks do not partition the beliefs");
  }

  DiagnosisBelief out;
  for (std::size_t i = 0; i < n; ++i) {
    double w = answer_likelihood(block[i], answer);
    if (w == 0.0) continue;
    out.entries.push_back(
        BeliefEntry{beliefs.entries[i].diagnosis, beliefs.entries[i].probability * w});
  }
  return normalize(std::move(out));
}

std::string probabilities_to_csv(const std::map<std::string, double>& probs,
                                 std::string_view key_column) {
  std::string out(key_column);
  out += ",probability\n";
  char buf[64];
  for (const auto& [key, p] : probs) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out += key;
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

std::map<std::string, double> probabilities_from_csv(std::string_view text) {
  std::map<std::string, double> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 || line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(0, line_no, "expected 'key,probability'");
    }
    std::string value = line.substr(comma + 1);
    char* end = nullptr;
    double p = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
      throw ParseError(0, line_no, "bad probability '" + value + "'");
    }
    out[line.substr(0, comma)] = p;
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace

void write_fault_model(const std::filesystem::path& sc_csv,
                       const std::filesystem::path& ax_csv, const FaultModel& model) {
  write_text(sc_csv, probabilities_to_csv(model.sc_probs, "kind"));
  write_text(ax_csv, probabilities_to_csv(model.ax_probs, "label"));
}

}  // namespace diagseq
