#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace costshare {

enum class ErrorKind {
  kValidation,
  kUnreachable,
  kTooManyTerminals,
  kRootIsPlayer,
  kNotAUser,
  kUnknownPlayer,
  kNonConvergence,
  kInstanceTooLarge,
  kNotOuterplanar,
  kNotFoundWithinBudget,
  kNoRainbow,
  kZigZagNotFound,
};

std::string_view to_string(ErrorKind kind);

// Base error for every failure raised by the library. The kind is stable and
// machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Validation errors are caused by bad input; everything else is a solver
  // failure on otherwise well-formed input.
  bool is_validation() const noexcept { return kind_ == ErrorKind::kValidation || kind_ == ErrorKind::kRootIsPlayer; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::kValidation, message);
}

}  // namespace costshare
