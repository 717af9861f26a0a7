#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "diagseq/dpi.hpp"
#include "diagseq/formula.hpp"
#include "diagseq/sat.hpp"

namespace diagseq {

/// Structure-preserving clausification: every compound subformula gets a
/// fresh variable equivalent to it. Subformulas shared by pointer are encoded
/// once.
class CnfEncoder {
 public:
  explicit CnfEncoder(sat::Solver& solver) : solver_(solver) {}

  /// Literal equivalent to `f` under the emitted clauses.
  sat::Lit encode(const Formula& f);

 private:
  sat::Lit constant_true();

  sat::Solver& solver_;
  std::unordered_map<std::string, sat::Var> atoms_;
  std::unordered_map<const void*, sat::Lit> memo_;
  std::vector<Formula> keep_alive_;
  bool have_true_ = false;
  sat::Var true_var_ = 0;
};

/// Consistency / entailment checks over a DPI with the axioms of K switched
/// on and off through selector assumptions. One instance owns one solver and
/// is not thread-safe; build one per thread.
class Reasoner {
 public:
  explicit Reasoner(const Dpi& dpi,
                    std::uint64_t decision_budget = sat::kDefaultDecisionBudget);

  std::size_t num_axioms() const { return axiom_selectors_.size(); }

  /// True iff {K[i] : i in kept} ∪ B ∪ P is inconsistent or entails some
  /// n ∈ N.
  bool is_conflict(std::span<const std::size_t> kept);

  bool is_consistent(std::span<const std::size_t> kept);

  /// {K[i] : i in kept} ∪ B ∪ P ⊨ goal.
  bool entails(std::span<const std::size_t> kept, const Formula& goal);

  void add_positive(const Formula& f);
  void add_negative(const Formula& f);

  std::uint64_t solver_calls() const { return solver_calls_; }

 private:
  sat::Result solve(const std::vector<sat::Lit>& assumptions);
  std::vector<sat::Lit> assumptions_for(std::span<const std::size_t> kept) const;

  sat::Solver solver_;
  CnfEncoder encoder_;
  std::vector<sat::Lit> axiom_selectors_;
  std::vector<sat::Lit> negative_roots_;
  std::vector<sat::Lit> negative_selectors_;
  std::uint64_t solver_calls_ = 0;
};

/// True iff the conjunction of `sentences` is satisfiable.
bool is_consistent(std::span<const Formula> sentences,
                   std::uint64_t decision_budget = sat::kDefaultDecisionBudget);

/// True iff sentences ∪ {¬goal} is unsatisfiable.
bool entails(std::span<const Formula> sentences, const Formula& goal,
             std::uint64_t decision_budget = sat::kDefaultDecisionBudget);

}  // namespace diagseq
