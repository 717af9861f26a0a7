#include "diagseq/query.hpp"

#include <algorithm>

#include "diagseq/error.hpp"
#include "diagseq/reasoner.hpp"

namespace diagseq {

std::string to_string(Answer a) { return a == Answer::kPositive ? "P" : "N"; }

PartitionBlock QPartition::block_of(std::size_t i) const {
  auto has = [i](const std::vector<std::size_t>& v) {
    return std::find(v.begin(), v.end(), i) != v.end();
  };
  if (has(d_plus)) return PartitionBlock::kPlus;
  if (has(d_minus)) return PartitionBlock::kMinus;
  if (has(d_zero)) return PartitionBlock::kZero;
  throw InvalidPartition("leading diagnosis " + std::to_string(i) + " is in no block");
}

QPartition make_qpartition(std::vector<std::size_t> d_plus, std::vector<std::size_t> d_minus,
                           std::vector<std::size_t> d_zero, std::span<const double> probs) {
  auto mass = [&](const std::vector<std::size_t>& block) {
    double s = 0.0;
    for (std::size_t i : block) s += probs[i];
    return s;
  };
  QPartition qp;
  qp.p_plus = mass(d_plus);
  qp.p_minus = mass(d_minus);
  qp.p_zero = mass(d_zero);
  qp.d_plus = std::move(d_plus);
  qp.d_minus = std::move(d_minus);
  qp.d_zero = std::move(d_zero);
  return qp;
}

namespace {

std::vector<std::size_t> kept_axioms(std::size_t k, const Diagnosis& d) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::binary_search(d.axioms.begin(), d.axioms.end(), i)) kept.push_back(i);
  }
  return kept;
}

}  // namespace

QPartition compute_qpartition(const Dpi& dpi, std::span<const Diagnosis> leading,
                              std::span<const double> probs, const Query& q,
                              bool probe_fast_path) {
  if (probs.size() != leading.size()) {
    throw Error("belief vector does not match the leading diagnoses");
  }
  std::vector<std::size_t> plus, minus, zero;

  if (probe_fast_path && q.probe) {
    for (std::size_t i = 0; i < leading.size(); ++i) {
      const auto& ax = leading[i].axioms;
      (std::binary_search(ax.begin(), ax.end(), *q.probe) ? minus : plus).push_back(i);
    }
    return make_qpartition(std::move(plus), std::move(minus), std::move(zero), probs);
  }

  Reasoner with_negative(dpi);
  with_negative.add_negative(q.sentence);
  Reasoner with_positive(dpi);
  with_positive.add_positive(q.sentence);
  for (std::size_t i = 0; i < leading.size(); ++i) {
    std::vector<std::size_t> kept = kept_axioms(dpi.knowledge.size(), leading[i]);
    if (with_negative.is_conflict(kept)) {
      plus.push_back(i);
    } else if (with_positive.is_conflict(kept)) {
      minus.push_back(i);
    } else {
      zero.push_back(i);
    }
  }
  return make_qpartition(std::move(plus), std::move(minus), std::move(zero), probs);
}

bool is_strong(const QPartition& qp) { return qp.d_zero.empty(); }

std::vector<PoolEntry> candidate_pool(const Dpi& dpi, std::span<const Diagnosis> leading,
                                      std::span<const double> probs,
                                      bool probe_fast_path) {
  if (leading.size() < 2) {
    throw EmptyPool("query pool needs at least two leading diagnoses");
  }
  std::vector<PoolEntry> pool;
  for (std::size_t i = 0; i < dpi.knowledge.size(); ++i) {
    Query q{dpi.knowledge[i].label, dpi.knowledge[i].formula, i};
    QPartition qp = compute_qpartition(dpi, leading, probs, q, probe_fast_path);
    if (qp.is_query()) pool.push_back(PoolEntry{std::move(q), std::move(qp)});
  }
  if (pool.empty()) {
    throw EmptyPool("no probe separates the leading diagnoses");
  }
  return pool;
}

double positive_class_prob(const QPartition& qp) { return qp.p_plus + 0.5 * qp.p_zero; }

double negative_class_prob(const QPartition& qp) { return 1.0 - positive_class_prob(qp); }

}  // namespace diagseq
