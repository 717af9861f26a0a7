#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diagseq/diagnosis.hpp"
#include "diagseq/dpi.hpp"
#include "diagseq/query.hpp"

namespace diagseq {

/// Every probability the model hands out lies in [kProbEpsilon, 1 - kProbEpsilon].
inline constexpr double kProbEpsilon = 1e-6;

double clamp_probability(double p);

enum class DistributionKind { kEq, kMod, kStr };

std::string to_string(DistributionKind kind);
/// Case-insensitive "eq", "mod", "str". Throws ConfigError.
DistributionKind parse_distribution_kind(std::string_view name);

struct DistributionSpec {
  DistributionKind kind = DistributionKind::kEq;
  /// Rate of the exponential density; unused for EQ.
  double lambda = 0.0;
  std::uint64_t seed = 0;

  /// Spec with the standard rate for `kind`: 0.5 for MOD, 1.75 for STR.
  static DistributionSpec standard(DistributionKind kind, std::uint64_t seed);
};

/// Sub-component kind -> number of occurrences. Kinds are the operator names
/// NOT, AND, OR, IMPLIES, IFF, plus ATOM once per atom occurrence.
using SubComponentCounts = std::map<std::string, int>;

SubComponentCounts count_subcomponents(const Formula& f);
std::map<std::string, SubComponentCounts> extract_subcomponents(const SentenceSet& k);

/// EQ assigns one shared uniform draw (clamped) to every kind. MOD and STR
/// give each kind a distinct rank i in 1..|SC| by a random permutation and
/// the density value λ·exp(-λx) at a uniform x in [i - 1/2, i + 1/2). The
/// exponential values are returned unclamped; they never leave (0, 1).
/// Pure function of (spec, kinds).
std::map<std::string, double> generate_distribution(const DistributionSpec& spec,
                                                    std::span<const std::string> kinds);

/// 1 - Π (1 - p(sc)) over occurrences with multiplicity, clamped.
/// Throws MissingSubComponent.
double axiom_fault_prob(const SubComponentCounts& occurrences,
                        const std::map<std::string, double>& sc_probs);

struct FaultModel {
  std::map<std::string, double> sc_probs;
  std::map<std::string, double> ax_probs;
  DistributionSpec spec;
};

FaultModel make_fault_model(const Dpi& dpi, const DistributionSpec& spec);

/// Per-axiom probabilities in K order. Throws UnknownLabel if an axiom of K
/// has no entry.
std::vector<double> axiom_probabilities(const FaultModel& model, const Dpi& dpi);

/// Π_{ax∈D} p(ax) · Π_{ax∈K∖D} (1 - p(ax)), un-normalized. Factors are
/// multiplied in sorted order so diagnoses with equal factor multisets get
/// bit-identical values. Throws UnknownLabel for indices outside K.
double diagnosis_prior(const Diagnosis& d, std::span<const double> axiom_probs);

struct BeliefEntry {
  Diagnosis diagnosis;
  double probability = 0.0;
};

struct DiagnosisBelief {
  std::vector<BeliefEntry> entries;
  bool normalized = false;
};

/// Throws ZeroMass when every entry is zero.
DiagnosisBelief normalize(DiagnosisBelief beliefs);

/// Likelihood of `answer` for a diagnosis in the given q-partition block:
/// 1 if the block predicted it, 1/2 if uncommitted, 0 if contradicted.
double answer_likelihood(PartitionBlock block, Answer answer);

/// Reweights by answer_likelihood, drops contradicted diagnoses and
/// renormalizes. Entry i of `beliefs` must be leading diagnosis i of `qp`.
/// Throws InvalidPartition if the blocks do not partition the entries and
/// ZeroMass if nothing survives.
DiagnosisBelief bayes_update(const DiagnosisBelief& beliefs, const QPartition& qp,
                             Answer answer);

/// `kind,probability` / `label,probability` CSV with 17 significant digits.
std::string probabilities_to_csv(const std::map<std::string, double>& probs,
                                 std::string_view key_column);
std::map<std::string, double> probabilities_from_csv(std::string_view text);

void write_fault_model(const std::filesystem::path& sc_csv,
                       const std::filesystem::path& ax_csv, const FaultModel& model);

}  // namespace diagseq
