#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "diagseq/query.hpp"
#include "diagseq/rng.hpp"

namespace diagseq {

enum class MeasureKind { kEnt, kSpl, kKl, kEmcb, kMps, kBme, kRio, kRnd };

enum class Direction { kMinimize, kMaximize, kNone };

inline constexpr MeasureKind kAllMeasures[] = {
    MeasureKind::kEnt, MeasureKind::kSpl, MeasureKind::kKl,  MeasureKind::kEmcb,
    MeasureKind::kMps, MeasureKind::kBme, MeasureKind::kRio, MeasureKind::kRnd};

Direction direction(MeasureKind m);
/// "ENT", "SPL", "KL", "EMCb", "MPS", "BME", "RIO", "RND".
std::string to_string(MeasureKind m);
/// Case-insensitive. Throws ConfigError.
MeasureKind parse_measure(std::string_view name);

/// Minimum worst-case elimination demanded by RIO.
struct RioState {
  std::size_t n = 1;
  std::size_t leading_size = 0;
};

/// n = max(1, ceil(|D|/4)), clamped to floor(|D|/2) where that is positive.
RioState initial_rio_state(std::size_t leading_size);

/// Raises n by one when fewer than ceil(|D|/2) diagnoses were eliminated,
/// lowers it by one otherwise, then clamps to [1, floor(new_leading_size/2)].
RioState update_rio_state(const RioState& rio, std::size_t eliminated,
                          std::size_t new_leading_size);

/// m(q) for the given partition. Throws MissingRioState for RIO without a
/// state and InvalidPartition if D+ and D- are both empty. KL returns -inf
/// when a nonempty block has zero probability; RND evaluates to 0.
double evaluate_measure(MeasureKind m, const QPartition& qp,
                        const std::optional<RioState>& rio = std::nullopt);

/// Index of the pool element that optimizes `m`. Values within a relative
/// 1e-12 count as ties, resolved by the smallest index. RND draws one index
/// from `rng` and consumes nothing otherwise. Throws EmptyPool.
std::size_t select_query(MeasureKind m, std::span<const PoolEntry> pool,
                         const std::optional<RioState>& rio, Rng& rng);

}  // namespace diagseq
