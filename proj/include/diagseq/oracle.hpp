#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "diagseq/query.hpp"
#include "diagseq/rng.hpp"

namespace diagseq {

enum class OracleKind { kPlausible, kRandom, kImplausible };

inline constexpr OracleKind kAllOracles[] = {OracleKind::kPlausible, OracleKind::kRandom,
                                             OracleKind::kImplausible};

std::string to_string(OracleKind kind);
/// Case-insensitive "plausible", "random", "implausible". Throws ConfigError.
OracleKind parse_oracle_kind(std::string_view name);

struct OracleStrategy {
  OracleKind kind = OracleKind::kPlausible;
  std::uint64_t seed = 0;
};

/// Answers P with probability x (plausible), 1/2 (random) or 1 - x
/// (implausible), where x is the estimated probability of P. Consumes
/// exactly one draw from `rng`.
Answer classify(OracleKind kind, double x, Rng& rng);

}  // namespace diagseq
