#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diagseq {

enum class FormulaKind { kAtom, kTrue, kFalse, kNot, kAnd, kOr, kImplies, kIff };

/// Immutable propositional formula. Copies share the underlying tree, so
/// passing by value is cheap. Equality is structural.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula child);
  /// Requires at least two operands.
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);

  FormulaKind kind() const;
  /// Atom name; empty for every other kind.
  const std::string& name() const;
  std::span<const Formula> children() const;

  /// Stable identity of the shared node, used to memoize per-node work.
  const void* node_id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

bool is_identifier(std::string_view text);

/// Parses the prefix s-expression syntax:
///   formula := atom | true | false | (not f) | (and f f+) | (or f f+)
///            | (implies f f) | (iff f f)
/// Throws ParseError carrying the byte offset of the offending token.
Formula parse_formula(std::string_view text);

/// Inverse of parse_formula; single spaces, no trailing whitespace.
std::string to_string(const Formula& f);

/// Sorted, duplicate-free atom names occurring in `f`.
std::vector<std::string> atoms_of(const Formula& f);

}  // namespace diagseq
