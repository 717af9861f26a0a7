#include "diagseq/diagnosis.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "diagseq/error.hpp"
#include "diagseq/prob_model.hpp"

namespace diagseq {

Diagnosis make_diagnosis(std::vector<std::size_t> axioms) {
  std::sort(axioms.begin(), axioms.end());
  axioms.erase(std::unique(axioms.begin(), axioms.end()), axioms.end());
  return Diagnosis{std::move(axioms)};
}

Diagnosis diagnosis_from_labels(const Dpi& dpi, const std::vector<std::string>& labels) {
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    auto i = dpi.knowledge.index_of(l);
    if (!i) throw UnknownLabel("unknown axiom label '" + l + "'");
    idx.push_back(*i);
  }
  return make_diagnosis(std::move(idx));
}

std::vector<std::string> labels_of(const Dpi& dpi, const Diagnosis& d) {
  std::vector<std::string> out;
  for (std::size_t i : d.axioms) out.push_back(dpi.knowledge[i].label);
  return out;
}

std::string join_labels(const Dpi& dpi, const Diagnosis& d) {
  std::string out;
  for (std::size_t i : d.axioms) {
    if (!out.empty()) out += ';';
    out += dpi.knowledge[i].label;
  }
  return out;
}

// Node ordering for the best-first HS-tree. `value` is the exact score of a
// finished node; `bound` an upper bound on the score of any node in the
// subtree below an open one.
struct DiagnosisEngine::Scoring {
  enum class Mode { kProbability, kCardinality } mode;
  std::span<const double> probs;
  std::vector<double> ratio;
  double inflating_product = 1.0;  // product of ratios > 1 over all of K
  bool any_inflating = false;

  static Scoring cardinality() { return Scoring{Mode::kCardinality, {}, {}, 1.0, false}; }

  static Scoring probability(std::span<const double> probs) {
    Scoring s{Mode::kProbability, probs, {}, 1.0, false};
    for (double p : probs) {
      double r = p / (1.0 - p);
      s.ratio.push_back(r);
      if (r > 1.0) {
        s.inflating_product *= r;
        s.any_inflating = true;
      }
    }
    return s;
  }

  double value(const std::vector<std::size_t>& h) const {
    if (mode == Mode::kCardinality) return -static_cast<double>(h.size());
    return diagnosis_prior(Diagnosis{h}, probs);
  }

  double bound(const std::vector<std::size_t>& h) const {
    double v = value(h);
    if (mode == Mode::kCardinality || !any_inflating) return v;
    // Adding an axiom with p > 1/2 raises the product formula; the most any
    // descendant can gain is the product of the remaining such ratios.
    double gain = inflating_product;
    for (std::size_t i : h) {
      if (ratio[i] > 1.0) gain /= ratio[i];
    }
    return v * std::max(gain, 1.0) * (1.0 + 1e-12);
  }
};

DiagnosisEngine::DiagnosisEngine(Dpi dpi, EngineOptions options)
    : dpi_(std::move(dpi)),
      options_(options),
      reasoner_(dpi_, options.decision_budget) {
  std::vector<std::size_t> order(num_axioms());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return dpi_.knowledge[a].label < dpi_.knowledge[b].label;
  });
  label_rank_.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) label_rank_[order[r]] = r;
}

std::vector<std::size_t> DiagnosisEngine::complement(
    std::span<const std::size_t> subset) const {
  std::vector<char> removed(num_axioms(), 0);
  for (std::size_t i : subset) removed.at(i) = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < num_axioms(); ++i) {
    if (!removed[i]) out.push_back(i);
  }
  return out;
}

bool DiagnosisEngine::is_conflict(std::span<const std::size_t> axioms) {
  return reasoner_.is_conflict(axioms);
}

bool DiagnosisEngine::is_valid_diagnosis(const Diagnosis& d) {
  for (std::size_t i : d.axioms) {
    if (i >= num_axioms()) {
      throw UnknownLabel("axiom index " + std::to_string(i) + " outside K");
    }
  }
  return !reasoner_.is_conflict(complement(d.axioms));
}

std::optional<Conflict> DiagnosisEngine::minimal_conflict(
    std::span<const std::size_t> candidates) {
  std::vector<std::size_t> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (!reasoner_.is_conflict(pool)) return std::nullopt;

  // QuickXplain: returns a minimal X ⊆ c such that base ∪ X is a conflict,
  // given that base ∪ c is one.
  auto quickxplain = [this](auto&& self, std::vector<std::size_t>& base,
                            bool base_grew, std::span<const std::size_t> c)
      -> std::vector<std::size_t> {
    if (base_grew && reasoner_.is_conflict(base)) return {};
    if (c.size() <= 1) return {c.begin(), c.end()};
    std::size_t half = c.size() / 2;
    auto c1 = c.subspan(0, half);
    auto c2 = c.subspan(half);

    std::size_t mark = base.size();
    base.insert(base.end(), c1.begin(), c1.end());
    std::vector<std::size_t> d2 = self(self, base, !c1.empty(), c2);
    base.resize(mark);

    base.insert(base.end(), d2.begin(), d2.end());
    std::vector<std::size_t> d1 = self(self, base, !d2.empty(), c1);
    base.resize(mark);

    d1.insert(d1.end(), d2.begin(), d2.end());
    return d1;
  };

  std::vector<std::size_t> base;
  std::vector<std::size_t> result = quickxplain(quickxplain, base, false, pool);
  std::sort(result.begin(), result.end());
  return Conflict{std::move(result)};
}

std::optional<Conflict> DiagnosisEngine::conflict_for(
    const std::vector<std::size_t>& hitting) {
  for (const Conflict& c : conflicts_) {
    bool disjoint = std::none_of(c.axioms.begin(), c.axioms.end(), [&](std::size_t a) {
      return std::binary_search(hitting.begin(), hitting.end(), a);
    });
    if (disjoint) return c;
  }
  auto found = minimal_conflict(complement(hitting));
  if (found) conflicts_.push_back(*found);
  return found;
}

bool DiagnosisEngine::is_minimal_diagnosis(const std::vector<std::size_t>& hitting) {
  // Diagnoses are closed under supersets, so checking the |H| maximal proper
  // subsets suffices.
  for (std::size_t k = 0; k < hitting.size(); ++k) {
    std::vector<std::size_t> smaller = hitting;
    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
    if (!reasoner_.is_conflict(complement(smaller))) return false;
  }
  return true;
}

void DiagnosisEngine::check_solvable() {
  if (reasoner_.is_conflict(std::span<const std::size_t>{})) {
    throw Unsolvable("B ∪ P is inconsistent or entails a negative measurement");
  }
}

std::vector<Diagnosis> DiagnosisEngine::search(const Scoring& scoring,
                                               std::optional<std::size_t> limit) {
  check_solvable();
  const std::size_t cap = options_.max_diagnosis_size.value_or(num_axioms());

  struct Item {
    double key;
    bool finished;
    std::uint64_t seq;
    std::vector<std::size_t> set;
    std::vector<std::size_t> tie;  // sorted label ranks, finished items only
  };
  // Max-heap order: higher key first; on equal keys open nodes before
  // finished ones (an open node may still yield an equally probable
  // diagnosis), finished ones in lexicographic order, open ones FIFO.
  auto lower = [](const Item& a, const Item& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.finished != b.finished) return a.finished;
    if (a.finished) return a.tie > b.tie;
    return a.seq > b.seq;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(lower)> open(lower);
  std::set<std::vector<std::size_t>> visited;
  std::uint64_t seq = 0;

  std::vector<Diagnosis> found;
  auto subsumed = [&](const std::vector<std::size_t>& h) {
    return std::any_of(found.begin(), found.end(), [&](const Diagnosis& d) {
      return std::includes(h.begin(), h.end(), d.axioms.begin(), d.axioms.end());
    });
  };

  visited.insert({});
  open.push(Item{scoring.bound({}), false, seq++, {}, {}});
  while (!open.empty() && (!limit || found.size() < *limit)) {
    Item item = open.top();
    open.pop();
    if (subsumed(item.set)) continue;

    if (item.finished) {
      found.push_back(Diagnosis{std::move(item.set)});
      continue;
    }

    std::optional<Conflict> conflict = conflict_for(item.set);
    if (!conflict) {
      if (is_minimal_diagnosis(item.set)) {
        double v = scoring.value(item.set);
        std::vector<std::size_t> tie;
        for (std::size_t i : item.set) tie.push_back(label_rank_[i]);
        std::sort(tie.begin(), tie.end());
        open.push(Item{v, true, seq++, std::move(item.set), std::move(tie)});
      }
      continue;
    }
    if (item.set.size() >= cap) continue;
    for (std::size_t c : conflict->axioms) {
      std::vector<std::size_t> child = item.set;
      child.insert(std::upper_bound(child.begin(), child.end(), c), c);
      if (!visited.insert(child).second) continue;
      if (subsumed(child)) continue;
      double key = scoring.bound(child);
      open.push(Item{key, false, seq++, std::move(child), {}});
    }
  }
  return found;
}

std::vector<Diagnosis> DiagnosisEngine::leading_diagnoses(
    std::span<const double> axiom_probs, std::optional<std::size_t> ld) {
  if (axiom_probs.size() != num_axioms()) {
    throw Error("axiom probability vector does not match |K|");
  }
  if (ld && *ld == 0) throw Error("ld must be positive");
  return search(Scoring::probability(axiom_probs), ld);
}

std::size_t DiagnosisEngine::count_minimal_diagnoses_up_to(std::size_t bound) {
  if (bound == 0) throw Error("bound must be positive");
  return search(Scoring::cardinality(), bound).size();
}

void DiagnosisEngine::refresh_conflicts() {
  if (!options_.reuse_conflicts) {
    conflicts_.clear();
    return;
  }
  // Old conflicts stay conflicts under more measurements but may lose
  // minimality; shrink each one and drop duplicates and supersets.
  std::vector<Conflict> shrunk;
  for (const Conflict& c : conflicts_) {
    if (auto m = minimal_conflict(c.axioms)) shrunk.push_back(std::move(*m));
  }
  std::sort(shrunk.begin(), shrunk.end(), [](const Conflict& a, const Conflict& b) {
    return a.axioms.size() != b.axioms.size() ? a.axioms.size() < b.axioms.size()
                                              : a < b;
  });
  conflicts_.clear();
  for (Conflict& c : shrunk) {
    bool redundant = std::any_of(conflicts_.begin(), conflicts_.end(), [&](const Conflict& k) {
      return std::includes(c.axioms.begin(), c.axioms.end(), k.axioms.begin(), k.axioms.end());
    });
    if (!redundant) conflicts_.push_back(std::move(c));
  }
}

void DiagnosisEngine::add_positive(const Formula& f) {
  dpi_.positive.push_back(f);
  reasoner_.add_positive(f);
  refresh_conflicts();
}

void DiagnosisEngine::add_negative(const Formula& f) {
  dpi_.negative.push_back(f);
  reasoner_.add_negative(f);
  refresh_conflicts();
}

bool is_valid_diagnosis(const Dpi& dpi, const Diagnosis& d) {
  return DiagnosisEngine(dpi).is_valid_diagnosis(d);
}

std::optional<Conflict> minimal_conflict(const Dpi& dpi,
                                         std::span<const std::size_t> candidates) {
  return DiagnosisEngine(dpi).minimal_conflict(candidates);
}

std::vector<Diagnosis> leading_diagnoses(const Dpi& dpi, const FaultModel& model,
                                         std::optional<std::size_t> ld,
                                         EngineOptions options) {
  std::vector<double> probs = axiom_probabilities(model, dpi);
  return DiagnosisEngine(dpi, options).leading_diagnoses(probs, ld);
}

std::size_t count_minimal_diagnoses_up_to(const Dpi& dpi, std::size_t bound) {
  return DiagnosisEngine(dpi).count_minimal_diagnoses_up_to(bound);
}

}  // namespace diagseq
