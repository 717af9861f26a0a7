#include "diagseq/error.hpp"

namespace diagseq {

namespace {

std::string format_parse_error(std::size_t offset, std::size_t line,
                               const std::string& message) {
  if (line > 0) return "line " + std::to_string(line) + ": " + message;
  return "offset " + std::to_string(offset) + ": " + message;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::size_t line,
                       const std::string& message)
    : Error(format_parse_error(offset, line, message)),
      offset_(offset),
      line_(line),
      detail_(message) {}

}  // namespace diagseq
