#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphent {

enum class ErrorKind {
  DanglingEndpoint,
  DuplicateEdgeId,
  OracleInconsistency,
  LocalFinitenessViolation,
  InvalidParams,
  ParseError,
  UnknownFamily,
  UnknownVertex,
  WindowTooSmall,
  AllZeroTail,
  NotIrreducible,
  NotInOmega,
  HypothesisViolated,
  EmptyComponent,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorKind::DuplicateEdgeId: return "DuplicateEdgeId";
    case ErrorKind::OracleInconsistency: return "OracleInconsistency";
    case ErrorKind::LocalFinitenessViolation: return "LocalFinitenessViolation";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::AllZeroTail: return "AllZeroTail";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotInOmega: return "NotInOmega";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::EmptyComponent: return "EmptyComponent";
  }
  return "Unknown";
}

// Single exception type for the library; `kind()` carries the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace graphent
