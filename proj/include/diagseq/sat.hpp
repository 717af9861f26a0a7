#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace diagseq::sat {

/// Literal encoding: 2 * var for the positive literal, 2 * var + 1 for the
/// negative one.
using Lit = std::uint32_t;
using Var = std::uint32_t;

inline constexpr Lit make_lit(Var v, bool negated = false) {
  return (v << 1) | static_cast<Lit>(negated);
}
inline constexpr Lit negate(Lit l) { return l ^ 1u; }
inline constexpr Var var_of(Lit l) { return l >> 1; }
inline constexpr bool is_negated(Lit l) { return (l & 1u) != 0; }

enum class Result { kSat, kUnsat };

inline constexpr std::uint64_t kDefaultDecisionBudget = 10'000'000;

/// Conflict-driven clause-learning solver with assumption-based incremental
/// solving. Clauses learnt under one set of assumptions stay valid for later
/// calls because assumptions are only ever decisions.
class Solver {
 public:
  explicit Solver(std::uint64_t decision_budget = kDefaultDecisionBudget);

  Var new_var();
  std::size_t num_vars() const { return assigns_.size(); }

  /// Adds a clause at the root level. Returns false once the clause set is
  /// unsatisfiable without any assumptions.
  bool add_clause(std::vector<Lit> lits);

  /// Throws ResourceLimit when more than the decision budget is spent in
  /// this call.
  Result solve(std::span<const Lit> assumptions = {});

  /// Value of `l` in the last satisfying assignment.
  bool model_value(Lit l) const;

  void set_decision_budget(std::uint64_t budget) { decision_budget_ = budget; }
  std::uint64_t total_decisions() const { return total_decisions_; }
  std::uint64_t total_conflicts() const { return total_conflicts_; }

 private:
  static constexpr std::uint8_t kFalse = 0;
  static constexpr std::uint8_t kTrue = 1;
  static constexpr std::uint8_t kUndef = 2;
  static constexpr int kNoReason = -1;

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    double activity = 0.0;
  };

  enum class SearchStatus { kSat, kUnsat, kRestart };

  std::uint8_t value(Lit l) const {
    std::uint8_t a = assigns_[var_of(l)];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (l & 1u));
  }
  std::size_t decision_level() const { return trail_lim_.size(); }

  void enqueue(Lit l, int reason);
  int propagate();
  void analyze(int conflict, std::vector<Lit>& learnt, std::size_t& backtrack_level);
  void cancel_until(std::size_t level);
  SearchStatus search(std::span<const Lit> assumptions, std::uint64_t conflict_limit);
  Lit pick_branch_lit();
  void attach(int clause_index);
  void reduce_learnts();

  void bump_var(Var v);
  void bump_clause(Clause& c);
  void heap_insert(Var v);
  Var heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_less(Var a, Var b) const { return activity_[a] > activity_[b]; }

  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // indexed by literal
  std::vector<std::uint8_t> assigns_;
  std::vector<std::uint8_t> polarity_;
  std::vector<std::uint32_t> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint8_t> model_;

  std::vector<double> activity_;
  std::vector<Var> heap_;
  std::vector<int> heap_index_;  // -1 when not in heap
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;

  std::size_t num_learnts_ = 0;
  std::size_t max_learnts_ = 4000;
  bool ok_ = true;

  std::uint64_t decision_budget_;
  std::uint64_t call_decisions_ = 0;
  std::uint64_t total_decisions_ = 0;
  std::uint64_t total_conflicts_ = 0;
};

}  // namespace diagseq::sat
