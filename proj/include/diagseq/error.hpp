#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diagseq {

/// Base class of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula or DPI text. `offset` is a byte offset into the parsed
/// string; `line` is 1-based and 0 when the input was a single formula.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::size_t line, const std::string& message);

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::string detail_;
};

/// The SAT backend ran out of its decision budget. This says nothing about
/// satisfiability; the instance was too hard for the configured budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

#define DIAGSEQ_SIMPLE_ERROR(Name)  \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  }

DIAGSEQ_SIMPLE_ERROR(DuplicateLabel);
DIAGSEQ_SIMPLE_ERROR(MissingSection);
DIAGSEQ_SIMPLE_ERROR(UnknownLabel);
DIAGSEQ_SIMPLE_ERROR(Unsolvable);
DIAGSEQ_SIMPLE_ERROR(ZeroMass);
DIAGSEQ_SIMPLE_ERROR(EmptyPool);
DIAGSEQ_SIMPLE_ERROR(MissingRioState);
DIAGSEQ_SIMPLE_ERROR(InvalidPartition);
DIAGSEQ_SIMPLE_ERROR(MissingSubComponent);
DIAGSEQ_SIMPLE_ERROR(InfeasibleParams);
DIAGSEQ_SIMPLE_ERROR(InsufficientData);
DIAGSEQ_SIMPLE_ERROR(ZeroMean);
DIAGSEQ_SIMPLE_ERROR(IoError);
DIAGSEQ_SIMPLE_ERROR(ConfigError);

#undef DIAGSEQ_SIMPLE_ERROR

}  // namespace diagseq
