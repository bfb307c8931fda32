#pragma once

#include <stdexcept>
#include <string>

namespace dshock {

/// Classes of failure raised by the library. The CLI maps each class to an
/// exit code, so new kinds must be added to `exit_code_for` as well.
enum class ErrorKind {
  Validation,
  Parse,
  NoOverlap,
  DegenerateData,
  OutOfRange,
  EntropyViolation,
  MassCollapse,
  RadiusCollapse,
  EmptySupport,
  NoCluster,
  QuadratureFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dshock
