#pragma once

#include <stdexcept>
#include <string>

namespace fharm {

/// Failure categories surfaced by the library. The CLI maps these to
/// process exit codes (config/parse -> 2, numeric -> 3).
enum class ErrorKind {
  parameter,         // invalid constructor/operation parameter
  domain,            // argument outside the object's working interval
  config,            // malformed configuration or unresolved reference
  numeric,           // integration/root-finding did not reach tolerance
  no_pole,           // warping function vanished before r_max
  empty_domain,      // flux equation unsolvable on the whole interval
  ambiguous_root,    // non-monotone flux equation, multiple brackets
  precondition,      // stated precondition of a checker violated
  degenerate_metric, // conformal factor vanished on the image
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::no_pole: return "no_pole";
    case ErrorKind::empty_domain: return "empty_domain";
    case ErrorKind::ambiguous_root: return "ambiguous_root";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::degenerate_metric: return "degenerate_metric";
  }
  return "unknown";
}

}  // namespace fharm
