#pragma once

#include <stdexcept>
#include <string>

namespace hjlab {

enum class ErrorKind {
  kRejectedInput,
  kSingularComposition,
  kOrderExhausted,
  kChartDomain,
  kDegenerateMetric,
  kDegenerateInput,
  kUnsupportedTarget,
  kPreconditionViolation,
  kUnknownName,
  kIo,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; the kind decides how callers
// (mostly the scenario runner) classify the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRejectedInput: return "rejected input";
    case ErrorKind::kSingularComposition: return "singular composition";
    case ErrorKind::kOrderExhausted: return "jet order exhausted";
    case ErrorKind::kChartDomain: return "chart domain";
    case ErrorKind::kDegenerateMetric: return "degenerate metric";
    case ErrorKind::kDegenerateInput: return "degenerate input";
    case ErrorKind::kUnsupportedTarget: return "unsupported target";
    case ErrorKind::kPreconditionViolation: return "precondition violation";
    case ErrorKind::kUnknownName: return "unknown name";
    case ErrorKind::kIo: return "i/o";
  }
  return "error";
}

}  // namespace hjlab
