#include "diagseq/dpi.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "diagseq/error.hpp"

namespace diagseq {

void SentenceSet::add(std::string label, Formula formula) {
  if (index_of(label)) throw DuplicateLabel("duplicate label '" + label + "'");
  items_.push_back(LabeledSentence{std::move(label), std::move(formula)});
}

std::optional<std::size_t> SentenceSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].label == label) return i;
  }
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

Formula parse_line_formula(std::string_view text, std::size_t line_no,
                           std::size_t line_offset) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw ParseError(line_offset + e.offset(), line_no, e.detail());
  }
}

}  // namespace

Dpi parse_dpi(std::string_view text) {
  enum Section { kNone = -1, kK = 0, kB, kP, kN };
  Dpi dpi;
  std::array<bool, 4> seen{};
  Section current = kNone;
  std::vector<std::pair<std::optional<std::string>, Formula>> axioms;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    std::size_t line_start = pos;
    pos = eol + 1;
    ++line_no;

    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t content_offset = line_start + (line.data() - raw.data());

    if (line.front() == '[') {
      Section next = kNone;
      if (line == "[K]") next = kK;
      else if (line == "[B]") next = kB;
      else if (line == "[P]") next = kP;
      else if (line == "[N]") next = kN;
      if (next == kNone) {
        throw ParseError(content_offset, line_no,
                         "unknown section header '" + std::string(line) + "'");
      }
      if (seen[next]) {
        throw ParseError(content_offset, line_no,
                         "section " + std::string(line) + " appears twice");
      }
      seen[next] = true;
      current = next;
      continue;
    }

    switch (current) {
      case kNone:
        throw ParseError(content_offset, line_no,
                         "expected section header before content");
      case kK: {
        std::optional<std::string> label;
        std::string_view body = line;
        std::size_t body_offset = content_offset;
        if (auto colon = line.find(':'); colon != std::string_view::npos) {
          std::string_view l = trim(line.substr(0, colon));
          if (!is_identifier(l)) {
            throw ParseError(content_offset, line_no,
                             "invalid axiom label '" + std::string(l) + "'");
          }
          label = std::string(l);
          std::string_view rest = line.substr(colon + 1);
          body = trim(rest);
          body_offset = content_offset + colon + 1 + (body.data() - rest.data());
        }
        axioms.emplace_back(std::move(label),
                            parse_line_formula(body, line_no, body_offset));
        break;
      }
      case kB: dpi.background.push_back(parse_line_formula(line, line_no, content_offset)); break;
      case kP: dpi.positive.push_back(parse_line_formula(line, line_no, content_offset)); break;
      case kN: dpi.negative.push_back(parse_line_formula(line, line_no, content_offset)); break;
    }
  }

  static constexpr std::array<const char*, 4> kNames = {"[K]", "[B]", "[P]", "[N]"};
  for (std::size_t s = 0; s < seen.size(); ++s) {
    if (!seen[s]) throw MissingSection(std::string("missing section ") + kNames[s]);
  }

  for (std::size_t i = 0; i < axioms.size(); ++i) {
    auto& [label, formula] = axioms[i];
    dpi.knowledge.add(label ? *label : "ax" + std::to_string(i + 1), formula);
  }
  return dpi;
}

std::string serialize_dpi(const Dpi& dpi) {
  std::ostringstream out;
  out << "[K]\n";
  for (const auto& s : dpi.knowledge) out << s.label << ": " << to_string(s.formula) << '\n';
  auto section = [&](const char* header, const std::vector<Formula>& fs) {
    out << header << '\n';
    for (const Formula& f : fs) out << to_string(f) << '\n';
  };
  section("[B]", dpi.background);
  section("[P]", dpi.positive);
  section("[N]", dpi.negative);
  return out.str();
}

Dpi read_dpi_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open DPI file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_dpi(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(e.offset(), e.line(), path.string() + ": " + e.detail());
  }
}

void write_dpi_file(const std::filesystem::path& path, const Dpi& dpi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write DPI file '" + path.string() + "'");
  out << serialize_dpi(dpi);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace diagseq
