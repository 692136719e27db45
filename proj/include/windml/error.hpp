#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace windml {

enum class ErrorKind {
  Range,
  Shape,
  Data,
  InsufficientSamples,
  UndefinedVariance,
  EmptyInput,
  Argument,
  Config,
  Parse,
  Numeric,
  Divergence,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Range: return "range";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Data: return "data";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::UndefinedVariance: return "undefined-variance";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Single exception type for the toolkit; the kind lets callers (and the CLI)
/// tell failures apart without a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace windml
