#include "diagseq/oracle.hpp"

#include <cctype>

#include "diagseq/error.hpp"

namespace diagseq {

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kPlausible: return "plausible";
    case OracleKind::kRandom: return "random";
    case OracleKind::kImplausible: return "implausible";
  }
  return "?";
}

OracleKind parse_oracle_kind(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (OracleKind k : kAllOracles) {
    if (to_string(k) == lower) return k;
  }
  throw ConfigError("unknown oracle strategy '" + std::string(name) + "'");
}

Answer classify(OracleKind kind, double x, Rng& rng) {
  double u = rng.uniform();
  double p_positive = 0.5;
  if (kind == OracleKind::kPlausible) p_positive = x;
  if (kind == OracleKind::kImplausible) p_positive = 1.0 - x;
  return u < p_positive ? Answer::kPositive : Answer::kNegative;
}

}  // namespace diagseq
