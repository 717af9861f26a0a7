#include "diagseq/reasoner.hpp"

namespace diagseq {

using sat::Lit;
using sat::make_lit;
using sat::negate;

sat::Lit CnfEncoder::constant_true() {
  if (!have_true_) {
    true_var_ = solver_.new_var();
    solver_.add_clause({make_lit(true_var_)});
    have_true_ = true;
  }
  return make_lit(true_var_);
}

sat::Lit CnfEncoder::encode(const Formula& f) {
  if (auto it = memo_.find(f.node_id()); it != memo_.end()) return it->second;

  Lit result = 0;
  switch (f.kind()) {
    case FormulaKind::kAtom: {
      auto [it, inserted] = atoms_.try_emplace(f.name(), 0);
      if (inserted) it->second = solver_.new_var();
      result = make_lit(it->second);
      break;
    }
    case FormulaKind::kTrue: result = constant_true(); break;
    case FormulaKind::kFalse: result = negate(constant_true()); break;
    case FormulaKind::kNot: result = negate(encode(f.children()[0])); break;
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      std::vector<Lit> kids;
      for (const Formula& c : f.children()) kids.push_back(encode(c));
      Lit v = make_lit(solver_.new_var());
      // Or is encoded as the dual of And over negated operands.
      bool is_and = f.kind() == FormulaKind::kAnd;
      Lit out = is_and ? v : negate(v);
      std::vector<Lit> big{out};
      for (Lit k : kids) {
        Lit kk = is_and ? k : negate(k);
        solver_.add_clause({negate(out), kk});
        big.push_back(negate(kk));
      }
      solver_.add_clause(std::move(big));
      result = v;
      break;
    }
    case FormulaKind::kImplies: {
      Lit a = encode(f.children()[0]);
      Lit b = encode(f.children()[1]);
      Lit v = make_lit(solver_.new_var());
      solver_.add_clause({negate(v), negate(a), b});
      solver_.add_clause({v, a});
      solver_.add_clause({v, negate(b)});
      result = v;
      break;
    }
    case FormulaKind::kIff: {
      Lit a = encode(f.children()[0]);
      Lit b = encode(f.children()[1]);
      Lit v = make_lit(solver_.new_var());
      solver_.add_clause({negate(v), negate(a), b});
      solver_.add_clause({negate(v), a, negate(b)});
      solver_.add_clause({v, a, b});
      solver_.add_clause({v, negate(a), negate(b)});
      result = v;
      break;
    }
  }
  memo_.emplace(f.node_id(), result);
  keep_alive_.push_back(f);
  return result;
}

Reasoner::Reasoner(const Dpi& dpi, std::uint64_t decision_budget)
    : solver_(decision_budget), encoder_(solver_) {
  for (const auto& axiom : dpi.knowledge) {
    Lit root = encoder_.encode(axiom.formula);
    Lit sel = make_lit(solver_.new_var());
    solver_.add_clause({negate(sel), root});
    axiom_selectors_.push_back(sel);
  }
  for (const Formula& b : dpi.background) solver_.add_clause({encoder_.encode(b)});
  for (const Formula& p : dpi.positive) add_positive(p);
  for (const Formula& n : dpi.negative) add_negative(n);
}

void Reasoner::add_positive(const Formula& f) {
  solver_.add_clause({encoder_.encode(f)});
}

void Reasoner::add_negative(const Formula& f) {
  Lit root = encoder_.encode(f);
  Lit sel = make_lit(solver_.new_var());
  solver_.add_clause({negate(sel), negate(root)});
  negative_roots_.push_back(root);
  negative_selectors_.push_back(sel);
}

std::vector<sat::Lit> Reasoner::assumptions_for(
    std::span<const std::size_t> kept) const {
  std::vector<Lit> assumptions;
  assumptions.reserve(kept.size() + 1);
  for (std::size_t i : kept) assumptions.push_back(axiom_selectors_.at(i));
  return assumptions;
}

sat::Result Reasoner::solve(const std::vector<sat::Lit>& assumptions) {
  ++solver_calls_;
  return solver_.solve(assumptions);
}

bool Reasoner::is_consistent(std::span<const std::size_t> kept) {
  return solve(assumptions_for(kept)) == sat::Result::kSat;
}

bool Reasoner::is_conflict(std::span<const std::size_t> kept) {
  std::vector<Lit> assumptions = assumptions_for(kept);
  if (solve(assumptions) == sat::Result::kUnsat) return true;

  // A model that falsifies n witnesses non-entailment of n; only the
  // measurements every model so far satisfied need a dedicated call.
  std::vector<char> refuted(negative_roots_.size(), 0);
  auto mark_refuted = [&] {
    for (std::size_t j = 0; j < negative_roots_.size(); ++j) {
      if (!solver_.model_value(negative_roots_[j])) refuted[j] = 1;
    }
  };
  mark_refuted();
  for (std::size_t j = 0; j < negative_roots_.size(); ++j) {
    if (refuted[j]) continue;
    assumptions.push_back(negative_selectors_[j]);
    sat::Result r = solve(assumptions);
    assumptions.pop_back();
    if (r == sat::Result::kUnsat) return true;
    mark_refuted();
  }
  return false;
}

bool Reasoner::entails(std::span<const std::size_t> kept, const Formula& goal) {
  std::vector<Lit> assumptions = assumptions_for(kept);
  assumptions.push_back(negate(encoder_.encode(goal)));
  return solve(assumptions) == sat::Result::kUnsat;
}

bool is_consistent(std::span<const Formula> sentences, std::uint64_t decision_budget) {
  sat::Solver solver(decision_budget);
  CnfEncoder encoder(solver);
  for (const Formula& f : sentences) {
    if (!solver.add_clause({encoder.encode(f)})) return false;
  }
  return solver.solve() == sat::Result::kSat;
}

bool entails(std::span<const Formula> sentences, const Formula& goal,
             std::uint64_t decision_budget) {
  std::vector<Formula> all(sentences.begin(), sentences.end());
  all.push_back(Formula::negation(goal));
  return !is_consistent(all, decision_budget);
}

}  // namespace diagseq
