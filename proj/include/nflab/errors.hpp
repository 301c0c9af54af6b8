#pragma once

#include <stdexcept>
#include <string>

namespace nflab {

// Every failure mode the library reports.  Codes mirror the public
// contracts of the modules; callers that need to branch do so on the
// code, the message is for humans.
enum class ErrorCode {
  DomainExceeded,
  Overflow,
  ParseError,
  UnboundParam,
  UnsupportedConstruct,
  IoError,
  SchemaError,
  BoundaryRoot,
  NonConvergent,
  ClusterUnresolved,
  HypothesisUnchecked,
  NoStop,
  BoundViolated,
  NoUnitPoint,
  PathTooCloseToZero,
  QuadratureNonConvergent,
  PremiseFailed,
  OmissionFailed,
  HypothesisFailed,
  BracketInvalid,
  Indeterminate,
  InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DomainExceeded: return "DomainExceeded";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnboundParam: return "UnboundParam";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BoundaryRoot: return "BoundaryRoot";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::ClusterUnresolved: return "ClusterUnresolved";
    case ErrorCode::HypothesisUnchecked: return "HypothesisUnchecked";
    case ErrorCode::NoStop: return "NoStop";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::NoUnitPoint: return "NoUnitPoint";
    case ErrorCode::PathTooCloseToZero: return "PathTooCloseToZero";
    case ErrorCode::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorCode::PremiseFailed: return "PremiseFailed";
    case ErrorCode::OmissionFailed: return "OmissionFailed";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::Indeterminate: return "Indeterminate";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Syntax failure from the expression parser.  `position` is a byte offset
// into the input, `expected` describes the acceptable token set and
// `found` is the offending lexeme.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected, std::string found)
      : ParseError(ErrorCode::ParseError, position, std::move(expected), std::move(found)) {}

  // UnboundParam and UnsupportedConstruct carry positions too.
  ParseError(ErrorCode code, std::size_t position, std::string expected, std::string found)
      : Error(code, "at byte " + std::to_string(position) + ": expected " + expected +
                        ", found '" + found + "'"),
        position_(position),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

}  // namespace nflab
