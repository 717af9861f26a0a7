#include <doctest.h>

#include <set>

#include "diagseq/error.hpp"
#include "diagseq/generator.hpp"
#include "diagseq/session.hpp"
#include "support/brute_force.hpp"

using namespace diagseq;

namespace {

FaultModel model_for(const Dpi& dpi, DistributionKind kind, std::uint64_t seed) {
  return make_fault_model(dpi, DistributionSpec::standard(kind, seed));
}

// The input DPI extended with a session's answers.
Dpi replay(const Dpi& dpi, const SessionResult& r) {
  Dpi out = dpi;
  for (const auto& [id, answer] : r.answers) {
    Formula f = dpi.knowledge[*dpi.knowledge.index_of(id)].formula;
    (answer == Answer::kPositive ? out.positive : out.negative).push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("a contradictory pair needs one query") {
  Dpi dpi = parse_dpi("[K]\nA\n(not A)\n[B]\n[P]\n[N]\n");
  FaultModel fm = model_for(dpi, DistributionKind::kMod, 1);
  for (MeasureKind m : kAllMeasures) {
    for (OracleKind s : kAllOracles) {
      SessionConfig cfg;
      cfg.measure = m;
      cfg.strategy = s;
      cfg.seed = 5;
      SessionResult r = run_session(dpi, fm, cfg);
      CHECK(r.n_queries == 1);
      CHECK_FALSE(r.aborted);
      REQUIRE(r.answers.size() == 1);
      REQUIRE(r.target.axioms.size() == 1);
      // A positive answer confirms the probed axiom, leaving the other faulty.
      std::size_t probed = *dpi.knowledge.index_of(r.answers[0].first);
      bool positive = r.answers[0].second == Answer::kPositive;
      CHECK((r.target.axioms[0] == probed) == !positive);
    }
  }
}

TEST_CASE("nothing to ask when the diagnosis is already unique") {
  Dpi dpi = parse_dpi("[K]\nA\nB\n[B]\n[P]\n[N]\n");
  SessionResult r = run_session(dpi, model_for(dpi, DistributionKind::kEq, 2), SessionConfig{});
  CHECK(r.n_queries == 0);
  CHECK(r.target.axioms.empty());
  CHECK_FALSE(r.aborted);
}

TEST_CASE("invalid configs are rejected") {
  Dpi dpi = parse_dpi("[K]\nA\n(not A)\n[B]\n[P]\n[N]\n");
  SessionConfig cfg;
  cfg.ld = 1;
  CHECK_THROWS_AS(run_session(dpi, model_for(dpi, DistributionKind::kEq, 2), cfg), ConfigError);
}

TEST_CASE("query cap aborts the session") {
  GeneratorParams gp;
  gp.n_axioms = 20;
  gp.n_conflicts = 4;
  gp.seed = 3;
  Dpi dpi = generate_dpi(gp).dpi;
  SessionConfig cfg;
  cfg.max_queries = 1;
  cfg.measure = MeasureKind::kSpl;
  SessionResult r = run_session(dpi, model_for(dpi, DistributionKind::kEq, 1), cfg);
  CHECK(r.aborted);
  CHECK(r.n_queries == 1);
}

TEST_CASE("sessions on generated DPIs end with one minimal diagnosis") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GeneratorParams gp;
    gp.n_axioms = 11;
    gp.n_atoms = 3;
    gp.n_conflicts = 3;
    gp.min_conflict_size = 2;
    gp.max_conflict_size = 4;
    gp.seed = seed;
    Dpi dpi = generate_dpi(gp).dpi;
    FaultModel fm = model_for(dpi, DistributionKind::kStr, seed);
    for (MeasureKind m : kAllMeasures) {
      SessionConfig cfg;
      cfg.measure = m;
      cfg.strategy = kAllOracles[seed % 3];
      cfg.seed = seed * 31 + static_cast<std::uint64_t>(m);
      cfg.ld = 6;
      cfg.trace = true;
      SessionResult r = run_session(dpi, fm, cfg);
      REQUIRE_FALSE(r.aborted);
      CHECK(r.trace.size() == r.n_queries);
      std::set<std::string> ids;
      for (const TraceRecord& t : r.trace) {
        CHECK(t.eliminated >= 1);
        CHECK(ids.insert(t.query_id).second);
      }
      Dpi final_dpi = replay(dpi, r);
      auto minimal = brute::minimal_diagnoses(final_dpi);
      REQUIRE(minimal.size() == 1);
      CHECK(minimal[0] == r.target.axioms);
    }
  }
}

TEST_CASE("identical seeds reproduce identical sessions") {
  GeneratorParams gp;
  gp.n_axioms = 20;
  gp.seed = 8;
  Dpi dpi = generate_dpi(gp).dpi;
  FaultModel fm = model_for(dpi, DistributionKind::kMod, 4);
  SessionConfig cfg;
  cfg.measure = MeasureKind::kRnd;
  cfg.strategy = OracleKind::kRandom;
  cfg.seed = 77;
  cfg.trace = true;
  SessionResult a = run_session(dpi, fm, cfg);
  SessionResult b = run_session(dpi, fm, cfg);
  CHECK(a.answers == b.answers);
  CHECK(a.target == b.target);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(format_trace_record(a.trace[i]) == format_trace_record(b.trace[i]));
  }
  cfg.seed = 78;
  SessionResult c = run_session(dpi, fm, cfg);
  CHECK((c.answers != a.answers || c.n_queries != a.n_queries || c.target != a.target));
}

TEST_CASE("trace record format") {
  TraceRecord t{3, "ax7", 0.25, Answer::kNegative, 10, 4};
  CHECK(format_trace_record(t) == "3,ax7,0.25,N,10,4");
}
