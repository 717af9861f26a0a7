#include "diagseq/generator.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "diagseq/error.hpp"
#include "diagseq/rng.hpp"

namespace diagseq {

namespace {

Formula atom(const std::string& name) { return Formula::atom(name); }

Formula fact(const std::string& c, int form) {
  switch (form) {
    case 1: return Formula::negation(Formula::negation(atom(c)));
    case 2: return Formula::conjunction({atom(c), atom(c)});
    default: return atom(c);
  }
}

Formula rule(const std::string& a, const std::string& b, int form) {
  switch (form) {
    case 1: return Formula::disjunction({Formula::negation(atom(a)), atom(b)});
    case 2:
      return Formula::negation(Formula::conjunction({atom(a), Formula::negation(atom(b))}));
    default: return Formula::implication(atom(a), atom(b));
  }
}

Formula leaf(const std::string& c, int form) {
  switch (form) {
    case 1: return Formula::implication(atom(c), Formula::falsity());
    case 2: return Formula::equivalence(atom(c), Formula::falsity());
    default: return Formula::negation(atom(c));
  }
}

// True whenever every filler atom is true.
Formula filler(const std::string& a, const std::string& b, int form) {
  switch (form) {
    case 1: return Formula::implication(atom(a), atom(b));
    case 2: return Formula::disjunction({atom(a), Formula::negation(atom(b))});
    case 3: return Formula::conjunction({atom(a), atom(b)});
    case 4: return Formula::equivalence(atom(a), atom(b));
    default: return atom(a);
  }
}

// A ladder under construction. axioms[i] indexes `draft`; atoms[i] is the
// atom derived after the first i+1 axioms.
struct Ladder {
  std::vector<std::size_t> axioms;
  std::vector<std::string> atoms;
};

}  // namespace

GeneratedDpi generate_dpi(const GeneratorParams& params) {
  if (params.n_conflicts < 1) throw InfeasibleParams("need at least one conflict");
  if (params.min_conflict_size < 2 || params.min_conflict_size > params.max_conflict_size) {
    throw InfeasibleParams("conflict size range must satisfy 2 <= min <= max");
  }
  if (params.n_axioms < params.max_conflict_size) {
    throw InfeasibleParams("n_axioms is smaller than the largest conflict");
  }

  Rng rng(params.seed);
  auto form = [&](int n) { return params.vary_syntax ? static_cast<int>(rng.below(n)) : 0; };

  std::vector<Formula> draft;
  std::vector<Ladder> ladders;
  std::vector<std::string> has_leaf;  // atoms already denied by some leaf
  std::size_t next_atom = 0;
  auto fresh = [&] { return "c" + std::to_string(next_atom++); };

  for (std::size_t k = 0; k < params.n_conflicts; ++k) {
    std::size_t size = params.min_conflict_size +
                       rng.below(params.max_conflict_size - params.min_conflict_size + 1);
    Ladder ladder;

    if (params.overlap && !ladders.empty() && rng.below(2) == 1) {
      const Ladder& base = ladders[rng.below(ladders.size())];
      // Shareable prefix: never the base's leaf, and leave room for our own.
      std::size_t max_shared = std::min(base.axioms.size() - 1, size - 1);
      std::size_t shared = 1 + rng.below(max_shared);
      bool reuses_leaf_atom = shared == size - 1 &&
                              std::find(has_leaf.begin(), has_leaf.end(),
                                        base.atoms[shared - 1]) != has_leaf.end();
      if (!reuses_leaf_atom) {
        ladder.axioms.assign(base.axioms.begin(), base.axioms.begin() + shared);
        ladder.atoms.assign(base.atoms.begin(), base.atoms.begin() + shared);
      }
    }
    if (ladder.axioms.empty()) {
      std::string c = fresh();
      ladder.axioms.push_back(draft.size());
      draft.push_back(fact(c, form(3)));
      ladder.atoms.push_back(c);
    }
    while (ladder.axioms.size() + 1 < size) {
      std::string from = ladder.atoms.back();
      std::string to = fresh();
      ladder.axioms.push_back(draft.size());
      draft.push_back(rule(from, to, form(3)));
      ladder.atoms.push_back(to);
    }
    const std::string last = ladder.atoms.back();
    ladder.axioms.push_back(draft.size());
    draft.push_back(leaf(last, form(3)));
    ladder.atoms.push_back(last);
    has_leaf.push_back(last);
    ladders.push_back(std::move(ladder));
  }

  if (draft.size() > params.n_axioms) {
    throw InfeasibleParams("planted conflicts need " + std::to_string(draft.size()) +
                           " axioms but n_axioms is " + std::to_string(params.n_axioms));
  }
  const std::size_t fillers = params.n_axioms - draft.size();
  if (fillers > 0 && params.n_atoms == 0) {
    throw InfeasibleParams("filler axioms need a nonempty atom vocabulary");
  }
  for (std::size_t i = 0; i < fillers; ++i) {
    std::string a = "f" + std::to_string(rng.below(params.n_atoms));
    std::string b = "f" + std::to_string(rng.below(params.n_atoms));
    draft.push_back(filler(a, b, params.vary_syntax ? static_cast<int>(rng.below(5)) : 1));
  }

  std::vector<std::size_t> position(draft.size());
  std::iota(position.begin(), position.end(), 0);
  rng.shuffle(position);  // draft index -> K index

  std::vector<std::size_t> source(draft.size());
  for (std::size_t i = 0; i < draft.size(); ++i) source[position[i]] = i;
  GeneratedDpi out;
  for (std::size_t k = 0; k < source.size(); ++k) {
    out.dpi.knowledge.add("ax" + std::to_string(k + 1), draft[source[k]]);
  }
  for (const Ladder& l : ladders) {
    std::vector<std::size_t> idx;
    for (std::size_t a : l.axioms) idx.push_back(position[a]);
    std::sort(idx.begin(), idx.end());
    out.planted_conflicts.push_back(Conflict{std::move(idx)});
  }
  return out;
}

std::vector<FaultModel> instantiate_fault_models(const Dpi& dpi,
                                                 std::span<const DistributionKind> kinds,
                                                 std::size_t prob_choices,
                                                 std::uint64_t master_seed) {
  std::vector<FaultModel> out;
  for (DistributionKind kind : kinds) {
    for (std::size_t c = 0; c < prob_choices; ++c) {
      std::uint64_t seed =
          derive_seed(master_seed, "fm/" + to_string(kind) + "/" + std::to_string(c));
      out.push_back(make_fault_model(dpi, DistributionSpec::standard(kind, seed)));
    }
  }
  return out;
}

}  // namespace diagseq
