#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "diagseq/diagnosis.hpp"
#include "diagseq/dpi.hpp"
#include "diagseq/prob_model.hpp"

namespace diagseq {

struct GeneratorParams {
  std::size_t n_axioms = 30;
  /// Size of the filler vocabulary. Filler axioms never take part in a
  /// conflict; they pad K to n_axioms.
  std::size_t n_atoms = 8;
  std::size_t n_conflicts = 4;
  std::size_t min_conflict_size = 3;
  std::size_t max_conflict_size = 6;
  std::uint64_t seed = 0;
  /// Let later conflicts branch off a prefix of an earlier one.
  bool overlap = true;
  /// Pick among equivalent spellings of facts, rules and leaves.
  bool vary_syntax = true;
};

struct GeneratedDpi {
  Dpi dpi;
  /// Planted groups as K indices; each is a minimal conflict of `dpi`.
  std::vector<Conflict> planted_conflicts;
};

/// Each planted conflict is a ladder: a fact c, rules c -> c' -> ..., and a
/// leaf denying the last atom. Throws InfeasibleParams.
GeneratedDpi generate_dpi(const GeneratorParams& params);

/// prob_choices models per kind, kind-major, each drawn with the seed
/// derive_seed(master_seed, "fm/<KIND>/<choice>").
std::vector<FaultModel> instantiate_fault_models(const Dpi& dpi,
                                                 std::span<const DistributionKind> kinds,
                                                 std::size_t prob_choices,
                                                 std::uint64_t master_seed);

}  // namespace diagseq
