#include "diagseq/session.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "diagseq/error.hpp"
#include "diagseq/rng.hpp"

namespace diagseq {

std::string format_trace_record(const TraceRecord& r) {
  char x[64];
  std::snprintf(x, sizeof x, "%.17g", r.x);
  return std::to_string(r.step) + ',' + r.query_id + ',' + x + ',' + to_string(r.answer) + ',' +
         std::to_string(r.leading_size) + ',' + std::to_string(r.eliminated);
}

SessionResult run_session(const Dpi& dpi, const FaultModel& model, const SessionConfig& config) {
  if (config.ld < 2) throw ConfigError("ld must be at least 2");
  if (config.max_queries < 1) throw ConfigError("max_queries must be positive");

  const auto start = std::chrono::steady_clock::now();
  SessionResult result;
  DiagnosisEngine engine(dpi, config.engine);
  const std::vector<double> probs = axiom_probabilities(model, dpi);
  Rng oracle_rng(derive_seed(config.seed, "oracle"));
  Rng select_rng(derive_seed(config.seed, "select"));

  // Un-normalized mass on the prior scale: prior times the likelihoods of
  // all answers so far. Diagnoses first seen later enter with their prior.
  std::map<Diagnosis, double> mass;
  std::optional<RioState> rio;
  std::set<std::string> posed;

  for (;;) {
    std::vector<Diagnosis> leading = engine.leading_diagnoses(probs, config.ld);
    if (leading.size() < 2 && engine.count_minimal_diagnoses_up_to(2) == 1) {
      result.target = leading.front();
      break;
    }
    if (result.n_queries >= config.max_queries) {
      result.aborted = true;
      break;
    }

    std::vector<double> weights;
    double total = 0.0;
    for (const Diagnosis& d : leading) {
      auto it = mass.find(d);
      double w = it != mass.end() ? it->second : diagnosis_prior(d, probs);
      weights.push_back(w);
      total += w;
    }
    if (!(total > 0.0)) throw ZeroMass("leading diagnoses carry no probability mass");
    std::vector<double> beliefs;
    for (double w : weights) beliefs.push_back(w / total);

    std::vector<PoolEntry> pool =
        candidate_pool(engine.dpi(), leading, beliefs, config.probe_fast_path);
    if (config.measure == MeasureKind::kRio) {
      if (!rio) {
        rio = initial_rio_state(leading.size());
      } else {
        rio->leading_size = leading.size();
        rio->n = std::clamp<std::size_t>(rio->n, 1, std::max<std::size_t>(1, leading.size() / 2));
      }
    }
    const PoolEntry& chosen = pool[select_query(config.measure, pool, rio, select_rng)];
    if (!posed.insert(chosen.query.id).second) {
      throw Error("query '" + chosen.query.id + "' posed twice");
    }

    const double x = positive_class_prob(chosen.partition);
    const Answer answer = classify(config.strategy, x, oracle_rng);
    ++result.n_queries;
    result.answers.emplace_back(chosen.query.id, answer);
    if (answer == Answer::kPositive) {
      engine.add_positive(chosen.query.sentence);
    } else {
      engine.add_negative(chosen.query.sentence);
    }

    std::size_t eliminated = 0;
    for (std::size_t i = 0; i < leading.size(); ++i) {
      double w = weights[i] * answer_likelihood(chosen.partition.block_of(i), answer);
      if (w == 0.0) {
        ++eliminated;
        mass.erase(leading[i]);
      } else {
        mass[leading[i]] = w;
      }
    }
    if (rio) *rio = update_rio_state(*rio, eliminated, leading.size() - eliminated);

    if (config.trace) {
      result.trace.push_back(TraceRecord{result.n_queries, chosen.query.id, x, answer,
                                         leading.size(), eliminated});
    }
  }
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace diagseq
