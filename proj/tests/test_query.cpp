#include <doctest.h>

#include "diagseq/diagnosis.hpp"
#include "diagseq/error.hpp"
#include "diagseq/query.hpp"
#include "support/brute_force.hpp"
#include "support/worked_example.hpp"

using namespace diagseq;

namespace {

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

}  // namespace

TEST_CASE("q-partition of an entailed atom") {
  Dpi dpi = parse_dpi("[K]\nA\n(implies A B)\n(not B)\n[B]\n[P]\n[N]\n");
  std::vector<Diagnosis> leading{make_diagnosis({0}), make_diagnosis({1}), make_diagnosis({2})};
  Query q{"B", parse_formula("B"), std::nullopt};
  QPartition qp = compute_qpartition(dpi, leading, uniform(3), q);
  CHECK(qp.d_plus == std::vector<std::size_t>{2});
  CHECK(qp.d_minus == std::vector<std::size_t>{0, 1});
  CHECK(qp.d_zero.empty());
  CHECK(qp.is_query());
  CHECK(qp.p_plus + qp.p_minus + qp.p_zero == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a tautology is not a query") {
  Dpi dpi = parse_dpi("[K]\nA\n(implies A B)\n(not B)\n[B]\n[P]\n[N]\n");
  std::vector<Diagnosis> leading{make_diagnosis({0}), make_diagnosis({1}), make_diagnosis({2})};
  Query q{"t", Formula::truth(), std::nullopt};
  QPartition qp = compute_qpartition(dpi, leading, uniform(3), q);
  CHECK(qp.d_plus.size() == 3);
  CHECK(qp.d_minus.empty());
  CHECK_FALSE(qp.is_query());
}

TEST_CASE("an axiom shared by all leading diagnoses is not a query") {
  Dpi dpi = parse_dpi("[K]\nA\n(not A)\nB\n(not B)\n[B]\n[P]\n[N]\n");
  std::vector<Diagnosis> leading{make_diagnosis({0, 2}), make_diagnosis({0, 3})};
  Query q{"ax1", dpi.knowledge[0].formula, 0};
  for (bool fast : {true, false}) {
    QPartition qp = compute_qpartition(dpi, leading, uniform(2), q, fast);
    CHECK(qp.d_minus.size() == 2);
    CHECK(qp.d_plus.empty());
    CHECK_FALSE(qp.is_query());
  }
}

TEST_CASE("is_strong") {
  auto pool = worked_example::pool();
  CHECK(is_strong(pool[0].partition));
  QPartition weak = make_qpartition({0}, {1}, {2}, uniform(3));
  CHECK_FALSE(is_strong(weak));
  QPartition odd = make_qpartition({}, {0, 1}, {}, uniform(2));
  CHECK(is_strong(odd));
}

TEST_CASE("candidate_pool") {
  Dpi dpi = parse_dpi("[K]\nA\n(not A)\n[B]\n[P]\n[N]\n");
  std::vector<Diagnosis> leading{make_diagnosis({0}), make_diagnosis({1})};
  auto pool = candidate_pool(dpi, leading, uniform(2));
  REQUIRE(pool.size() == 2);
  CHECK(pool[0].query.id == "ax1");
  CHECK(pool[0].partition.d_plus == std::vector<std::size_t>{1});
  CHECK(pool[0].partition.d_minus == std::vector<std::size_t>{0});

  std::vector<Diagnosis> single{make_diagnosis({0})};
  CHECK_THROWS_AS(candidate_pool(dpi, single, uniform(1)), EmptyPool);
}

TEST_CASE("worked-example pool reproduces the q-partition table") {
  Dpi dpi;
  for (int i = 1; i <= 7; ++i) {
    dpi.knowledge.add("ax" + std::to_string(i), Formula::atom("x" + std::to_string(i)));
  }
  auto leading = worked_example::diagnoses();
  auto pool = candidate_pool(dpi, leading, worked_example::probabilities());
  auto table = worked_example::pool();
  REQUIRE(pool.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(pool[i].partition.d_plus == table[i].partition.d_plus);
    CHECK(pool[i].partition.d_minus == table[i].partition.d_minus);
  }
}

TEST_CASE("class probabilities") {
  auto pool = worked_example::pool();
  const double expected[] = {0.59, 0.45, 0.95, 0.55, 0.67, 0.86, 0.48};
  for (std::size_t i = 0; i < 7; ++i) {
    double pp = positive_class_prob(pool[i].partition);
    CHECK(pp == doctest::Approx(expected[i]).epsilon(0.005));
    CHECK(pp + negative_class_prob(pool[i].partition) == doctest::Approx(1.0).epsilon(1e-12));
  }
  QPartition qp;
  qp.p_plus = 0.4;
  qp.p_zero = 0.2;
  qp.p_minus = 0.4;
  CHECK(positive_class_prob(qp) == doctest::Approx(0.5));
}

TEST_CASE("probe fast path matches the definition on random DPIs") {
  Rng rng(31);
  for (int round = 0; round < 60; ++round) {
    Dpi dpi = brute::random_dpi(rng, {3 + rng.below(5), 4, 2, true});
    auto minimal = brute::minimal_diagnoses(dpi);
    if (minimal.size() < 2) continue;
    std::vector<Diagnosis> leading;
    for (const auto& m : minimal) leading.push_back(Diagnosis{m});
    auto p = uniform(leading.size());
    for (std::size_t i = 0; i < dpi.knowledge.size(); ++i) {
      Query q{dpi.knowledge[i].label, dpi.knowledge[i].formula, i};
      QPartition fast = compute_qpartition(dpi, leading, p, q, true);
      QPartition slow = compute_qpartition(dpi, leading, p, q, false);
      CHECK(fast.d_plus == slow.d_plus);
      CHECK(fast.d_minus == slow.d_minus);
      CHECK(slow.d_zero.empty());
    }
  }
}
