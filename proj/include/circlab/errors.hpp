#pragma once

#include <stdexcept>
#include <string>

namespace circlab {

// Error categories double as process exit codes for the command-line tool.
enum class ErrorKind : int {
  precondition = 2,
  resource = 3,
  invariant = 4,
};

class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-parsable tag, e.g. "not_diffeomorphism".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class PreconditionError : public LabError {
 public:
  PreconditionError(std::string code, const std::string& message)
      : LabError(ErrorKind::precondition, std::move(code), message) {}
};

class ResourceError : public LabError {
 public:
  ResourceError(std::string code, const std::string& message)
      : LabError(ErrorKind::resource, std::move(code), message) {}
};

class InvariantError : public LabError {
 public:
  InvariantError(std::string code, const std::string& message)
      : LabError(ErrorKind::invariant, std::move(code), message) {}
};

}  // namespace circlab
