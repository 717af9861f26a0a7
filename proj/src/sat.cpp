#include "diagseq/sat.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "diagseq/error.hpp"

namespace diagseq::sat {

namespace {

constexpr double kVarDecay = 1.0 / 0.95;
constexpr double kClauseDecay = 1.0 / 0.999;
constexpr std::uint64_t kRestartBase = 100;

// Luby restart sequence 1,1,2,1,1,2,4,...
double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1.0;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

Solver::Solver(std::uint64_t decision_budget) : decision_budget_(decision_budget) {}

Var Solver::new_var() {
  Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(kUndef);
  polarity_.push_back(1);  // prefer false on first decision
  level_.push_back(0);
  reason_.push_back(kNoReason);
  seen_.push_back(0);
  activity_.push_back(0.0);
  heap_index_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

bool Solver::add_clause(std::vector<Lit> lits) {
  assert(decision_level() == 0);
  if (!ok_) return false;

  std::sort(lits.begin(), lits.end());
  std::size_t j = 0;
  Lit prev = ~Lit{0};
  for (Lit l : lits) {
    assert(var_of(l) < num_vars());
    if (value(l) == kTrue || l == negate(prev)) return true;  // satisfied / tautology
    if (value(l) != kFalse && l != prev) lits[j++] = prev = l;
  }
  lits.resize(j);

  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  clauses_.push_back(Clause{std::move(lits), false, 0.0});
  attach(static_cast<int>(clauses_.size() - 1));
  return true;
}

void Solver::attach(int clause_index) {
  const auto& lits = clauses_[clause_index].lits;
  watches_[lits[0]].push_back(clause_index);
  watches_[lits[1]].push_back(clause_index);
}

void Solver::enqueue(Lit l, int reason) {
  Var v = var_of(l);
  assigns_[v] = is_negated(l) ? kFalse : kTrue;
  level_[v] = static_cast<std::uint32_t>(decision_level());
  reason_[v] = reason;
  trail_.push_back(l);
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = negate(p);
    std::vector<int>& ws = watches_[false_lit];
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      int ci = ws[i++];
      std::vector<Lit>& c = clauses_[ci].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);

      if (value(c[0]) == kTrue) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;

      ws[j++] = ci;
      if (value(c[0]) == kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(j);
  }
  return kNoReason;
}

void Solver::analyze(int conflict, std::vector<Lit>& learnt,
                     std::size_t& backtrack_level) {
  learnt.clear();
  learnt.push_back(0);  // asserting literal goes here
  int path_count = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();

  int ci = conflict;
  do {
    assert(ci != kNoReason);
    Clause& c = clauses_[ci];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      Lit q = c.lits[k];
      Var v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump_var(v);
      if (level_[v] >= decision_level()) {
        ++path_count;
      } else {
        learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[index - 1])]) --index;
    --index;
    p = trail_[index];
    have_p = true;
    ci = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path_count;
  } while (path_count > 0);
  learnt[0] = negate(p);

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k) {
      if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])]) max_i = k;
    }
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[var_of(learnt[1])];
  }
  for (Lit l : learnt) seen_[var_of(l)] = 0;
}

void Solver::cancel_until(std::size_t level) {
  if (decision_level() <= level) return;
  for (std::size_t k = trail_.size(); k > trail_lim_[level]; --k) {
    Var v = var_of(trail_[k - 1]);
    polarity_[v] = static_cast<std::uint8_t>(is_negated(trail_[k - 1]));
    assigns_[v] = kUndef;
    reason_[v] = kNoReason;
    if (heap_index_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

Lit Solver::pick_branch_lit() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[v] == kUndef) return make_lit(v, polarity_[v] != 0);
  }
  return ~Lit{0};
}

Solver::SearchStatus Solver::search(std::span<const Lit> assumptions,
                                    std::uint64_t conflict_limit) {
  std::uint64_t conflicts = 0;
  std::vector<Lit> learnt;
  for (;;) {
    int conflict = propagate();
    if (conflict != kNoReason) {
      ++conflicts;
      ++total_conflicts_;
      if (decision_level() == 0) {
        ok_ = false;
        return SearchStatus::kUnsat;
      }
      std::size_t backtrack_level = 0;
      analyze(conflict, learnt, backtrack_level);
      cancel_until(backtrack_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        clauses_.push_back(Clause{learnt, true, 0.0});
        int ci = static_cast<int>(clauses_.size() - 1);
        bump_clause(clauses_[ci]);
        attach(ci);
        ++num_learnts_;
        enqueue(learnt[0], ci);
      }
      var_inc_ *= kVarDecay;
      clause_inc_ *= kClauseDecay;
      continue;
    }

    if (conflicts >= conflict_limit) {
      cancel_until(0);
      return SearchStatus::kRestart;
    }

    Lit next = ~Lit{0};
    while (decision_level() < assumptions.size()) {
      Lit a = assumptions[decision_level()];
      std::uint8_t va = value(a);
      if (va == kTrue) {
        trail_lim_.push_back(trail_.size());  // dummy level keeps indices aligned
      } else if (va == kFalse) {
        return SearchStatus::kUnsat;
      } else {
        next = a;
        break;
      }
    }
    if (next == ~Lit{0}) {
      next = pick_branch_lit();
      if (next == ~Lit{0}) return SearchStatus::kSat;
      ++total_decisions_;
      if (++call_decisions_ > decision_budget_) {
        heap_insert(var_of(next));
        cancel_until(0);
        throw ResourceLimit("SAT decision budget of " +
                            std::to_string(decision_budget_) + " exhausted");
      }
    }
    trail_lim_.push_back(trail_.size());
    enqueue(next, kNoReason);
  }
}

Result Solver::solve(std::span<const Lit> assumptions) {
  if (!ok_) return Result::kUnsat;
  if (num_learnts_ > max_learnts_ + clauses_.size() / 2) reduce_learnts();

  call_decisions_ = 0;
  for (std::uint64_t restart = 0;; ++restart) {
    std::uint64_t limit =
        static_cast<std::uint64_t>(luby(2.0, restart) * kRestartBase);
    SearchStatus status = search(assumptions, limit);
    if (status == SearchStatus::kSat) {
      model_ = assigns_;
      cancel_until(0);
      return Result::kSat;
    }
    if (status == SearchStatus::kUnsat) {
      cancel_until(0);
      return Result::kUnsat;
    }
  }
}

bool Solver::model_value(Lit l) const {
  std::uint8_t a = model_[var_of(l)];
  return (a ^ (l & 1u)) == kTrue;
}

void Solver::reduce_learnts() {
  assert(decision_level() == 0);
  std::vector<double> acts;
  for (const Clause& c : clauses_) {
    if (c.learnt) acts.push_back(c.activity);
  }
  std::nth_element(acts.begin(), acts.begin() + acts.size() / 2, acts.end());
  double median = acts[acts.size() / 2];

  std::vector<Clause> kept;
  kept.reserve(clauses_.size());
  num_learnts_ = 0;
  for (Clause& c : clauses_) {
    if (c.learnt && c.lits.size() > 2 && c.activity < median) continue;
    if (c.learnt) ++num_learnts_;
    kept.push_back(std::move(c));
  }
  clauses_ = std::move(kept);
  for (Lit l : trail_) reason_[var_of(l)] = kNoReason;  // root level only
  for (auto& ws : watches_) ws.clear();
  for (std::size_t i = 0; i < clauses_.size(); ++i) attach(static_cast<int>(i));
  max_learnts_ += max_learnts_ / 10;
}

void Solver::bump_var(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(Clause& c) {
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (Clause& d : clauses_) {
      if (d.learnt) d.activity *= 1e-20;
    }
    clause_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(Var v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

Var Solver::heap_pop() {
  Var top = heap_.front();
  heap_index_[top] = -1;
  Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

void Solver::heap_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) {
      ++child;
    }
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

}  // namespace diagseq::sat
