#include "diagseq/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "diagseq/error.hpp"

namespace diagseq {

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  std::vector<Formula> children;
};

namespace {

bool is_reserved(std::string_view word) {
  return word == "true" || word == "false" || word == "not" || word == "and" ||
         word == "or" || word == "implies" || word == "iff";
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

Formula Formula::atom(std::string name) {
  if (!is_identifier(name) || is_reserved(name)) {
    throw Error("invalid atom name '" + name + "'");
  }
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kAtom, std::move(name), {}}));
}

Formula Formula::truth() {
  static const Formula kTrue(
      std::make_shared<const Node>(Node{FormulaKind::kTrue, {}, {}}));
  return kTrue;
}

Formula Formula::falsity() {
  static const Formula kFalse(
      std::make_shared<const Node>(Node{FormulaKind::kFalse, {}, {}}));
  return kFalse;
}

Formula Formula::negation(Formula child) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kNot, {}, {std::move(child)}}));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw Error("'and' needs at least two operands");
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kAnd, {}, std::move(children)}));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw Error("'or' needs at least two operands");
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kOr, {}, std::move(children)}));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kImplies, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::kIff, {}, {std::move(lhs), std::move(rhs)}}));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
std::span<const Formula> Formula::children() const { return node_->children; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  auto ca = a.children();
  auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// {{{ parsing

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse();
    skip_space();
    if (pos_ != text_.size()) fail("expected end of input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(pos_, 0, message);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string_view word() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      auto c = static_cast<unsigned char>(text_[pos_]);
      if (!std::isalnum(c) && c != '_') break;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  Formula parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected formula, found end of input");
    if (text_[pos_] == '(') return parse_compound();
    if (text_[pos_] == ')') fail("expected formula, found ')'");

    std::size_t start = pos_;
    std::string_view w = word();
    if (w.empty()) fail("expected formula, found unexpected character");
    if (w == "true") return Formula::truth();
    if (w == "false") return Formula::falsity();
    if (!is_identifier(w) || is_reserved(w)) {
      pos_ = start;
      fail("expected atom, found '" + std::string(w) + "'");
    }
    return Formula::atom(std::string(w));
  }

  Formula parse_compound() {
    std::size_t open = pos_;
    ++pos_;  // '('
    skip_space();
    std::size_t op_pos = pos_;
    std::string op(word());
    if (op.empty()) fail("expected operator after '('");

    std::vector<Formula> operands;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail("expected ')' to close '(' at offset " + std::to_string(open));
      if (text_[pos_] == ')') break;
      operands.push_back(parse());
    }
    std::size_t close = pos_;
    ++pos_;

    auto arity_error = [&](const std::string& expectation) {
      pos_ = close;
      fail("'" + op + "' " + expectation + ", got " +
           std::to_string(operands.size()));
    };

    if (op == "not") {
      if (operands.size() != 1) arity_error("takes exactly one operand");
      return Formula::negation(std::move(operands[0]));
    }
    if (op == "and" || op == "or") {
      if (operands.size() < 2) arity_error("needs at least two operands");
      return op == "and" ? Formula::conjunction(std::move(operands))
                         : Formula::disjunction(std::move(operands));
    }
    if (op == "implies" || op == "iff") {
      if (operands.size() != 2) arity_error("takes exactly two operands");
      return op == "implies"
                 ? Formula::implication(std::move(operands[0]), std::move(operands[1]))
                 : Formula::equivalence(std::move(operands[0]), std::move(operands[1]));
    }
    pos_ = op_pos;
    fail("expected one of not/and/or/implies/iff, found '" + op + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void write(const Formula& f, std::string& out) {
  auto compound = [&](const char* op) {
    out += '(';
    out += op;
    for (const Formula& c : f.children()) {
      out += ' ';
      write(c, out);
    }
    out += ')';
  };
  switch (f.kind()) {
    case FormulaKind::kAtom: out += f.name(); break;
    case FormulaKind::kTrue: out += "true"; break;
    case FormulaKind::kFalse: out += "false"; break;
    case FormulaKind::kNot: compound("not"); break;
    case FormulaKind::kAnd: compound("and"); break;
    case FormulaKind::kOr: compound("or"); break;
    case FormulaKind::kImplies: compound("implies"); break;
    case FormulaKind::kIff: compound("iff"); break;
  }
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == FormulaKind::kAtom) {
    out.insert(f.name());
    return;
  }
  for (const Formula& c : f.children()) collect_atoms(c, out);
}

}  // namespace

// }}}

Formula parse_formula(std::string_view text) {
  return FormulaParser(text).parse_all();
}

std::string to_string(const Formula& f) {
  std::string out;
  write(f, out);
  return out;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> atoms;
  collect_atoms(f, atoms);
  return {atoms.begin(), atoms.end()};
}

}  // namespace diagseq
