#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diagseq/dpi.hpp"
#include "diagseq/reasoner.hpp"

namespace diagseq {

struct FaultModel;

/// A set of retracted axioms, held as sorted indices into K.
struct Diagnosis {
  std::vector<std::size_t> axioms;

  friend auto operator<=>(const Diagnosis&, const Diagnosis&) = default;
};

/// A set of axioms of K that, together with B and P, is inconsistent or
/// entails some negative measurement. Sorted indices into K.
struct Conflict {
  std::vector<std::size_t> axioms;

  friend auto operator<=>(const Conflict&, const Conflict&) = default;
};

Diagnosis make_diagnosis(std::vector<std::size_t> axioms);

/// Throws UnknownLabel.
Diagnosis diagnosis_from_labels(const Dpi& dpi, const std::vector<std::string>& labels);
std::vector<std::string> labels_of(const Dpi& dpi, const Diagnosis& d);
/// Labels joined by ';' in K order, e.g. "ax2;ax7". Empty for {}.
std::string join_labels(const Dpi& dpi, const Diagnosis& d);

struct EngineOptions {
  /// Largest diagnosis the HS-tree will expand to; unset means |K|.
  std::optional<std::size_t> max_diagnosis_size;
  std::uint64_t decision_budget = sat::kDefaultDecisionBudget;
  /// Keep minimal conflicts across measurement additions (re-minimized
  /// against the extended instance) instead of rediscovering them.
  bool reuse_conflicts = true;
};

/// Diagnosis computations over one DPI whose measurement sets may grow.
/// Owns its reasoner; one engine per thread.
class DiagnosisEngine {
 public:
  explicit DiagnosisEngine(Dpi dpi, EngineOptions options = {});

  const Dpi& dpi() const { return dpi_; }
  std::size_t num_axioms() const { return dpi_.knowledge.size(); }

  /// (K∖D) ∪ B ∪ P is consistent and entails no n ∈ N. Throws UnknownLabel
  /// for indices outside K.
  bool is_valid_diagnosis(const Diagnosis& d);

  bool is_conflict(std::span<const std::size_t> axioms);

  /// A subset-minimal conflict within `candidates`, found by divide and
  /// conquer; nullopt if `candidates` is not a conflict at all.
  std::optional<Conflict> minimal_conflict(std::span<const std::size_t> candidates);

  /// Up to `ld` minimal diagnoses (all of them when ld is unset) in
  /// non-increasing prior probability; equal probabilities ordered by their
  /// sorted label lists, compared lexicographically. Throws Unsolvable.
  std::vector<Diagnosis> leading_diagnoses(std::span<const double> axiom_probs,
                                           std::optional<std::size_t> ld);

  /// min(bound, number of minimal diagnoses). Throws Unsolvable.
  std::size_t count_minimal_diagnoses_up_to(std::size_t bound);

  /// Extend P or N. Known conflicts are kept (and re-minimized) when
  /// conflict reuse is enabled, dropped otherwise.
  void add_positive(const Formula& f);
  void add_negative(const Formula& f);

  const std::vector<Conflict>& known_conflicts() const { return conflicts_; }
  std::uint64_t reasoner_calls() const { return reasoner_.solver_calls(); }

 private:
  struct Scoring;

  std::vector<Diagnosis> search(const Scoring& scoring, std::optional<std::size_t> limit);
  std::optional<Conflict> conflict_for(const std::vector<std::size_t>& hitting);
  bool is_minimal_diagnosis(const std::vector<std::size_t>& hitting);
  void refresh_conflicts();
  std::vector<std::size_t> complement(std::span<const std::size_t> subset) const;
  void check_solvable();

  Dpi dpi_;
  EngineOptions options_;
  Reasoner reasoner_;
  std::vector<Conflict> conflicts_;
  std::vector<std::size_t> label_rank_;  // position of each label in sorted order
};

bool is_valid_diagnosis(const Dpi& dpi, const Diagnosis& d);
std::optional<Conflict> minimal_conflict(const Dpi& dpi,
                                         std::span<const std::size_t> candidates);
std::vector<Diagnosis> leading_diagnoses(const Dpi& dpi, const FaultModel& model,
                                         std::optional<std::size_t> ld,
                                         EngineOptions options = {});
std::size_t count_minimal_diagnoses_up_to(const Dpi& dpi, std::size_t bound);

}  // namespace diagseq
