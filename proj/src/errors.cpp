#include "mcloop/errors.hpp"

namespace mcloop {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParam:
      return "InvalidParam";
    case ErrorKind::InvalidFrequency:
      return "InvalidFrequency";
    case ErrorKind::DenominatorUnderflow:
      return "DenominatorUnderflow";
    case ErrorKind::SingularResolvent:
      return "SingularResolvent";
    case ErrorKind::FeedbackSingular:
      return "FeedbackSingular";
    case ErrorKind::NoCrossing:
      return "NoCrossing";
    case ErrorKind::PropertyViolation:
      return "PropertyViolation";
    case ErrorKind::ConfigError:
      return "ConfigError";
    case ErrorKind::Unstable:
      return "Unstable";
    case ErrorKind::NotSettled:
      return "NotSettled";
    case ErrorKind::NonFinite:
      return "NonFinite";
  }
  return "Unknown";
}

}  // namespace mcloop
