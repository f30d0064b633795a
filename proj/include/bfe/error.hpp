#pragma once

#include <stdexcept>
#include <string>

namespace bfe {

enum class ErrorKind {
  DegenerateInput,
  InvalidArgument,
  Parse,
  Io,
  UndefinedMetric,
};

/// Library-wide exception. The kind lets callers (the CLI) map failures to
/// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateInput: return "degenerate input";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::UndefinedMetric: return "undefined metric";
  }
  return "error";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace bfe
