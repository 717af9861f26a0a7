#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diagseq/diagnosis.hpp"
#include "diagseq/dpi.hpp"
#include "diagseq/formula.hpp"

namespace diagseq {

enum class Answer { kPositive, kNegative };

std::string to_string(Answer a);

enum class PartitionBlock { kPlus, kMinus, kZero };

/// ⟨D+, D-, D0⟩ of a sentence over a leading-diagnoses list. Blocks hold
/// indices into that list; block probabilities are sums of the normalized
/// beliefs of their members.
struct QPartition {
  std::vector<std::size_t> d_plus;   // predict a positive classification
  std::vector<std::size_t> d_minus;  // predict a negative classification
  std::vector<std::size_t> d_zero;   // uncommitted
  double p_plus = 0.0;
  double p_minus = 0.0;
  double p_zero = 0.0;

  std::size_t leading_size() const {
    return d_plus.size() + d_minus.size() + d_zero.size();
  }
  /// Both classifications eliminate at least one diagnosis.
  bool is_query() const { return !d_plus.empty() && !d_minus.empty(); }
  /// Throws InvalidPartition if `i` is in no block.
  PartitionBlock block_of(std::size_t i) const;
};

/// Builds a partition and fills the block probabilities from `probs`
/// (normalized beliefs, indexed like the leading list).
QPartition make_qpartition(std::vector<std::size_t> d_plus, std::vector<std::size_t> d_minus,
                           std::vector<std::size_t> d_zero, std::span<const double> probs);

struct Query {
  std::string id;
  Formula sentence;
  /// Set when the sentence is axiom K[*probe] itself.
  std::optional<std::size_t> probe;
};

struct PoolEntry {
  Query query;
  QPartition partition;
};

/// Classifies each leading diagnosis by re-checking it against
/// ⟨K,B,P,N∪{q}⟩ (fails: D+) and ⟨K,B,P∪{q},N⟩ (fails: D-). For probes with
/// the fast path enabled, membership decides: ax ∈ D gives D-, else D+.
QPartition compute_qpartition(const Dpi& dpi, std::span<const Diagnosis> leading,
                              std::span<const double> probs, const Query& q,
                              bool probe_fast_path = true);

/// No uncommitted diagnoses.
bool is_strong(const QPartition& qp);

/// One probe query per axiom of K, in K order, keeping those that qualify
/// as queries. Throws EmptyPool if fewer than two leading diagnoses.
std::vector<PoolEntry> candidate_pool(const Dpi& dpi, std::span<const Diagnosis> leading,
                                      std::span<const double> probs,
                                      bool probe_fast_path = true);

/// p(D+) + p(D0)/2.
double positive_class_prob(const QPartition& qp);
/// 1 - positive_class_prob.
double negative_class_prob(const QPartition& qp);

}  // namespace diagseq
