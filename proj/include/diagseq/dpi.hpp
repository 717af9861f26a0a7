#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diagseq/formula.hpp"

namespace diagseq {

struct LabeledSentence {
  std::string label;
  Formula formula;

  friend bool operator==(const LabeledSentence&, const LabeledSentence&) = default;
};

/// Ordered sentences with unique labels.
class SentenceSet {
 public:
  SentenceSet() = default;

  /// Throws DuplicateLabel.
  void add(std::string label, Formula formula);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const LabeledSentence& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const SentenceSet&, const SentenceSet&) = default;

 private:
  std::vector<LabeledSentence> items_;
};

/// Diagnosis problem instance: retractable axioms K (one per component),
/// background B, positive measurements P and negative measurements N.
struct Dpi {
  SentenceSet knowledge;
  std::vector<Formula> background;
  std::vector<Formula> positive;
  std::vector<Formula> negative;

  friend bool operator==(const Dpi&, const Dpi&) = default;
};

/// Reads the sectioned text format ([K], [B], [P], [N]; `#` comments).
/// Unlabeled axioms get `ax<i>` where i is their 1-based position in K.
/// Throws ParseError (with line), DuplicateLabel or MissingSection.
Dpi parse_dpi(std::string_view text);

std::string serialize_dpi(const Dpi& dpi);

Dpi read_dpi_file(const std::filesystem::path& path);
void write_dpi_file(const std::filesystem::path& path, const Dpi& dpi);

}  // namespace diagseq
