#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcloop {

enum class ErrorKind {
  InvalidParam,
  InvalidFrequency,
  DenominatorUnderflow,
  SingularResolvent,
  FeedbackSingular,
  NoCrossing,
  PropertyViolation,
  ConfigError,
  Unstable,
  NotSettled,
  NonFinite,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mcloop
