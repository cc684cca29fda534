#pragma once

#include <stdexcept>
#include <string>

namespace resbasis {

enum class ErrorKind {
  kInvalidArgument,
  kDomain,
  kBreakpoint,
  kGeometryMismatch,
  kDiscontinuousField,
  kMixedParameters,
  kNonpositiveValue,
  kSchema,
  kNonConvergence,
  kDuplicateRoot,
  kSingularJacobian,
};

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Solver failures as opposed to bad input.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::kNonConvergence ||
           kind_ == ErrorKind::kDuplicateRoot ||
           kind_ == ErrorKind::kSingularJacobian;
  }

 private:
  ErrorKind kind_;
};

}  // namespace resbasis
