#include "diagseq/qsm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "diagseq/error.hpp"

namespace diagseq {

Direction direction(MeasureKind m) {
  switch (m) {
    case MeasureKind::kEnt:
    case MeasureKind::kSpl:
    case MeasureKind::kRio: return Direction::kMinimize;
    case MeasureKind::kKl:
    case MeasureKind::kEmcb:
    case MeasureKind::kMps:
    case MeasureKind::kBme: return Direction::kMaximize;
    case MeasureKind::kRnd: return Direction::kNone;
  }
  return Direction::kNone;
}

std::string to_string(MeasureKind m) {
  switch (m) {
    case MeasureKind::kEnt: return "ENT";
    case MeasureKind::kSpl: return "SPL";
    case MeasureKind::kKl: return "KL";
    case MeasureKind::kEmcb: return "EMCb";
    case MeasureKind::kMps: return "MPS";
    case MeasureKind::kBme: return "BME";
    case MeasureKind::kRio: return "RIO";
    case MeasureKind::kRnd: return "RND";
  }
  return "?";
}

MeasureKind parse_measure(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (MeasureKind m : kAllMeasures) {
    std::string candidate = to_string(m);
    for (char& c : candidate) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (candidate == lower) return m;
  }
  if (lower == "rio'" || lower == "rio_prime") return MeasureKind::kRio;
  throw ConfigError("unknown measure '" + std::string(name) + "'");
}

RioState initial_rio_state(std::size_t leading_size) {
  std::size_t n = std::max<std::size_t>(1, (leading_size + 3) / 4);
  n = std::min(n, std::max<std::size_t>(1, leading_size / 2));
  return RioState{n, leading_size};
}

RioState update_rio_state(const RioState& rio, std::size_t eliminated,
                          std::size_t new_leading_size) {
  std::size_t half_up = (rio.leading_size + 1) / 2;
  std::size_t n = rio.n;
  if (eliminated < half_up) {
    ++n;
  } else if (n > 1) {
    --n;
  }
  n = std::min(n, std::max<std::size_t>(1, new_leading_size / 2));
  return RioState{std::max<std::size_t>(n, 1), new_leading_size};
}

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy_value(const QPartition& qp) {
  double pp = positive_class_prob(qp);
  return plogp(pp) + plogp(1.0 - pp);
}

}  // namespace

double evaluate_measure(MeasureKind m, const QPartition& qp, const std::optional<RioState>& rio) {
  if (qp.d_plus.empty() && qp.d_minus.empty()) {
    throw InvalidPartition("partition has neither D+ nor D-");
  }
  const double n_plus = static_cast<double>(qp.d_plus.size());
  const double n_minus = static_cast<double>(qp.d_minus.size());
  switch (m) {
    case MeasureKind::kEnt:
      return entropy_value(qp);
    case MeasureKind::kSpl:
      return std::abs(n_plus - n_minus);
    case MeasureKind::kKl: {
      const double total_n = n_plus + n_minus;
      const double total_p = qp.p_plus + qp.p_minus;
      double sum = 0.0;
      for (auto [size, p] : {std::pair{n_plus, qp.p_plus}, std::pair{n_minus, qp.p_minus}}) {
        if (size == 0.0) continue;
        if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
        sum += size / total_n * std::log2(p / total_p);
      }
      return -sum;
    }
    case MeasureKind::kEmcb: {
      double pp = positive_class_prob(qp);
      return pp * n_minus + (1.0 - pp) * n_plus;
    }
    case MeasureKind::kMps: {
      if (qp.d_plus.size() == 1 && qp.d_minus.size() == 1) {
        return std::max(qp.p_plus, qp.p_minus);
      }
      if (qp.d_plus.size() < qp.d_minus.size()) return qp.d_plus.size() == 1 ? qp.p_plus : 0.0;
      if (qp.d_minus.size() < qp.d_plus.size()) return qp.d_minus.size() == 1 ? qp.p_minus : 0.0;
      return 0.0;
    }
    case MeasureKind::kBme:
      if (qp.p_minus < qp.p_plus) return n_minus;
      if (qp.p_plus < qp.p_minus) return n_plus;
      return 0.0;
    case MeasureKind::kRio: {
      if (!rio) throw MissingRioState("RIO needs a reinforcement state");
      const std::size_t c = std::min(qp.d_plus.size(), qp.d_minus.size());
      const double penalty = c >= rio->n ? static_cast<double>(c - rio->n)
                                         : static_cast<double>(qp.leading_size());
      return entropy_value(qp) / 2.0 + penalty;
    }
    case MeasureKind::kRnd:
      return 0.0;
  }
  return 0.0;
}

namespace {

// True if `a` beats `b` by more than rounding noise.
bool strictly_better(double a, double b, Direction dir) {
  if (a == b) return false;
  if (std::isinf(a) || std::isinf(b)) {
    return dir == Direction::kMaximize ? a > b : a < b;
  }
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  return dir == Direction::kMaximize ? a > b + tol : a < b - tol;
}

}  // namespace

std::size_t select_query(MeasureKind m, std::span<const PoolEntry> pool,
                         const std::optional<RioState>& rio, Rng& rng) {
  if (pool.empty()) throw EmptyPool("cannot select from an empty pool");
  if (m == MeasureKind::kRnd) return static_cast<std::size_t>(rng.below(pool.size()));
  const Direction dir = direction(m);
  std::size_t best = 0;
  double best_value = evaluate_measure(m, pool[0].partition, rio);
  for (std::size_t i = 1; i < pool.size(); ++i) {
    double v = evaluate_measure(m, pool[i].partition, rio);
    if (strictly_better(v, best_value, dir)) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

}  // namespace diagseq
