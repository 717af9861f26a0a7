#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diagseq/error.hpp"
#include "diagseq/prob_model.hpp"
#include "diagseq/rng.hpp"
#include "support/brute_force.hpp"

using namespace diagseq;

namespace {

DiagnosisBelief belief(std::vector<double> p) {
  DiagnosisBelief b;
  for (std::size_t i = 0; i < p.size(); ++i) {
    b.entries.push_back(BeliefEntry{make_diagnosis({i}), p[i]});
  }
  return b;
}

std::vector<std::string> kinds(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("k" + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("sub-component extraction") {
  CHECK(count_subcomponents(parse_formula("(and A (not B))")) ==
        SubComponentCounts{{"AND", 1}, {"NOT", 1}, {"ATOM", 2}});
  CHECK(count_subcomponents(parse_formula("A")) == SubComponentCounts{{"ATOM", 1}});
  CHECK(count_subcomponents(parse_formula("(implies (or A B) C)")) ==
        SubComponentCounts{{"IMPLIES", 1}, {"OR", 1}, {"ATOM", 3}});
  CHECK(count_subcomponents(parse_formula("(iff c false)")) ==
        SubComponentCounts{{"IFF", 1}, {"ATOM", 1}});

  Dpi dpi = parse_dpi("[K]\nA\nr: (not (not B))\n[B]\n[P]\n[N]\n");
  auto per_axiom = extract_subcomponents(dpi.knowledge);
  CHECK(per_axiom.at("ax1") == SubComponentCounts{{"ATOM", 1}});
  CHECK(per_axiom.at("r") == SubComponentCounts{{"NOT", 2}, {"ATOM", 1}});
}

TEST_CASE("axiom_fault_prob") {
  std::map<std::string, double> p{{"AND", 0.1}, {"OR", 0.1}, {"NOT", 0.2}, {"ATOM", 0.5}};
  CHECK(axiom_fault_prob({{"AND", 1}, {"OR", 1}}, p) == doctest::Approx(0.19));
  CHECK(axiom_fault_prob({{"ATOM", 1}}, p) == doctest::Approx(0.5));
  CHECK(axiom_fault_prob({{"NOT", 2}}, p) == doctest::Approx(0.36));
  CHECK(axiom_fault_prob({}, p) == kProbEpsilon);
  CHECK_THROWS_AS(axiom_fault_prob({{"IFF", 1}}, p), MissingSubComponent);
}

TEST_CASE("EQ distribution is one shared clamped draw") {
  auto k = kinds(7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = generate_distribution(DistributionSpec::standard(DistributionKind::kEq, seed), k);
    REQUIRE(m.size() == 7);
    double r = clamp_probability(Rng(seed).uniform());
    for (const auto& [kind, p] : m) CHECK(p == r);
  }
}

TEST_CASE("exponential distributions") {
  auto k = kinds(25);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto str = generate_distribution(DistributionSpec::standard(DistributionKind::kStr, seed), k);
    auto mod = generate_distribution(DistributionSpec::standard(DistributionKind::kMod, seed), k);
    for (const auto& [kind, p] : str) {
      CHECK(p > 0.0);
      CHECK(p <= 1.75 * std::exp(-0.875) + 1e-15);
    }
    for (const auto& [kind, p] : mod) {
      CHECK(p > 0.0);
      CHECK(p <= 0.5 * std::exp(-0.25) + 1e-15);
    }
    // Distinct ranks: sorted values fall in disjoint intervals.
    std::vector<double> v;
    for (const auto& [kind, p] : mod) v.push_back(p);
    std::sort(v.rbegin(), v.rend());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double x = -std::log(v[i] / 0.5) / 0.5;
      CHECK(x >= i + 0.5 - 1e-9);
      CHECK(x < i + 1.5 + 1e-9);
    }
    CHECK(str == generate_distribution(DistributionSpec::standard(DistributionKind::kStr, seed), k));
  }
  CHECK(generate_distribution(DistributionSpec::standard(DistributionKind::kStr, 1), k) !=
        generate_distribution(DistributionSpec::standard(DistributionKind::kStr, 2), k));
}

TEST_CASE("fault models clamp and cover every axiom") {
  Dpi dpi = parse_dpi("[K]\nA\n(implies A B)\n(iff B false)\n[B]\n[P]\n[N]\n");
  FaultModel m = make_fault_model(dpi, DistributionSpec::standard(DistributionKind::kStr, 4));
  CHECK(m.sc_probs.size() == 3);  // ATOM, IMPLIES, IFF
  for (const auto& [k, p] : m.sc_probs) {
    CHECK(p >= kProbEpsilon);
    CHECK(p <= 1 - kProbEpsilon);
  }
  auto probs = axiom_probabilities(m, dpi);
  REQUIRE(probs.size() == 3);
  CHECK(probs[0] == doctest::Approx(m.sc_probs.at("ATOM")));

  FaultModel missing = m;
  missing.ax_probs.erase("ax2");
  CHECK_THROWS_AS(axiom_probabilities(missing, dpi), UnknownLabel);
}

TEST_CASE("diagnosis_prior") {
  std::vector<double> p{0.1, 0.2, 0.3};
  CHECK(diagnosis_prior(make_diagnosis({0}), p) == doctest::Approx(0.056));
  CHECK(diagnosis_prior(make_diagnosis({}), p) == doctest::Approx(0.504));
  CHECK(diagnosis_prior(make_diagnosis({0, 1, 2}), p) == doctest::Approx(0.006));
  CHECK_THROWS_AS(diagnosis_prior(make_diagnosis({3}), p), UnknownLabel);
}

TEST_CASE("priors over all subsets sum to one") {
  Rng rng(3);
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(clamp_probability(rng.uniform()));
    double total = 0.0;
    for (const auto& s : brute::all_subsets(n)) total += diagnosis_prior(Diagnosis{s}, p);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("EQ priors depend only on structure") {
  Dpi dpi = parse_dpi("[K]\n(and a b)\n(and c d)\n(not e)\n[B]\n[P]\n[N]\n");
  FaultModel m = make_fault_model(dpi, DistributionSpec::standard(DistributionKind::kEq, 9));
  auto p = axiom_probabilities(m, dpi);
  CHECK(diagnosis_prior(make_diagnosis({0}), p) == diagnosis_prior(make_diagnosis({1}), p));
}

TEST_CASE("normalize") {
  auto n = normalize(belief({0.2, 0.2}));
  CHECK(n.normalized);
  CHECK(n.entries[0].probability == doctest::Approx(0.5));
  CHECK(normalize(belief({0.056})).entries[0].probability == doctest::Approx(1.0));
  auto three = normalize(belief({0.405, 0.045, 0.045}));
  CHECK(three.entries[0].probability == doctest::Approx(0.8182).epsilon(1e-4));
  CHECK(three.entries[1].probability == doctest::Approx(0.0909).epsilon(1e-3));
  CHECK_THROWS_AS(normalize(belief({0.0, 0.0})), ZeroMass);
}

TEST_CASE("bayes_update") {
  auto prior = belief({0.5, 0.3, 0.2});
  QPartition qp = make_qpartition({0}, {2}, {1}, std::vector<double>{0.5, 0.3, 0.2});
  auto post = bayes_update(prior, qp, Answer::kPositive);
  REQUIRE(post.entries.size() == 2);
  CHECK(post.entries[0].diagnosis == make_diagnosis({0}));
  CHECK(post.entries[0].probability == doctest::Approx(0.7692).epsilon(1e-4));
  CHECK(post.entries[1].probability == doctest::Approx(0.2308).epsilon(1e-3));

  QPartition strong = make_qpartition({0, 1}, {2}, {}, std::vector<double>{0.5, 0.3, 0.2});
  auto restricted = bayes_update(prior, strong, Answer::kPositive);
  REQUIRE(restricted.entries.size() == 2);
  CHECK(restricted.entries[0].probability == doctest::Approx(0.625));

  QPartition all_minus = make_qpartition({}, {0, 1, 2}, {}, std::vector<double>{0.5, 0.3, 0.2});
  CHECK_THROWS_AS(bayes_update(prior, all_minus, Answer::kPositive), ZeroMass);

  QPartition broken = make_qpartition({0}, {0}, {2}, std::vector<double>{0.5, 0.3, 0.2});
  CHECK_THROWS_AS(bayes_update(prior, broken, Answer::kPositive), InvalidPartition);
}

TEST_CASE("bayes_update properties on random partitions") {
  Rng rng(17);
  for (int round = 0; round < 500; ++round) {
    std::size_t n = 2 + rng.below(10);
    std::vector<double> raw;
    for (std::size_t i = 0; i < n; ++i) raw.push_back(0.01 + rng.uniform());
    DiagnosisBelief prior = normalize(belief(raw));
    std::vector<double> p;
    for (const auto& e : prior.entries) p.push_back(e.probability);
    std::vector<std::size_t> plus, minus, zero;
    plus.push_back(0);
    minus.push_back(1);
    bool strong = round % 2 == 0;
    for (std::size_t i = 2; i < n; ++i) {
      std::uint64_t r = strong ? rng.below(2) : rng.below(3);
      (r == 0 ? plus : r == 1 ? minus : zero).push_back(i);
    }
    QPartition qp = make_qpartition(plus, minus, zero, p);
    auto pos = bayes_update(prior, qp, Answer::kPositive);
    auto neg = bayes_update(prior, qp, Answer::kNegative);
    double sp = 0, sn = 0;
    for (const auto& e : pos.entries) sp += e.probability;
    for (const auto& e : neg.entries) sn += e.probability;
    CHECK(sp == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sn == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(normalize(pos).entries.size() == pos.entries.size());

    if (strong) {
      // p(P) * posterior_P + p(N) * posterior_N recovers the prior.
      double pp = positive_class_prob(qp);
      std::vector<double> mix(n, 0.0);
      for (const auto& e : pos.entries) mix[e.diagnosis.axioms[0]] += pp * e.probability;
      for (const auto& e : neg.entries) mix[e.diagnosis.axioms[0]] += (1 - pp) * e.probability;
      for (std::size_t i = 0; i < n; ++i) CHECK(mix[i] == doctest::Approx(p[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("probability CSV round-trips exactly") {
  std::map<std::string, double> m{{"ATOM", 0.1}, {"NOT", 1.0 / 3.0}, {"IFF", 2.5e-7}};
  std::string csv = probabilities_to_csv(m, "kind");
  CHECK(csv.rfind("kind,probability\n", 0) == 0);
  CHECK(probabilities_from_csv(csv) == m);
  CHECK_THROWS_AS(probabilities_from_csv("kind,probability\nATOM;0.1\n"), ParseError);

  Dpi dpi = parse_dpi("[K]\n(or a b)\n[B]\n[P]\n[N]\n");
  FaultModel fm = make_fault_model(dpi, DistributionSpec::standard(DistributionKind::kMod, 5));
  auto dir = std::filesystem::temp_directory_path() / "diagseq_fm_test";
  std::filesystem::create_directories(dir);
  write_fault_model(dir / "sc.csv", dir / "ax.csv", fm);
  std::ifstream f(dir / "ax.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(probabilities_from_csv(ss.str()) == fm.ax_probs);
  std::filesystem::remove_all(dir);
}

TEST_CASE("distribution names") {
  CHECK(parse_distribution_kind("str") == DistributionKind::kStr);
  CHECK(parse_distribution_kind("Mod") == DistributionKind::kMod);
  CHECK(to_string(DistributionKind::kEq) == "EQ");
  CHECK_THROWS_AS(parse_distribution_kind("uniform"), ConfigError);
}
