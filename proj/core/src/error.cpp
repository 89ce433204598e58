#include "costshare/error.hpp"

namespace costshare {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "Validation";
    case ErrorKind::kUnreachable: return "Unreachable";
    case ErrorKind::kTooManyTerminals: return "TooManyTerminals";
    case ErrorKind::kRootIsPlayer: return "RootIsPlayer";
    case ErrorKind::kNotAUser: return "NotAUser";
    case ErrorKind::kUnknownPlayer: return "UnknownPlayer";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::kNotOuterplanar: return "NotOuterplanar";
    case ErrorKind::kNotFoundWithinBudget: return "NotFoundWithinBudget";
    case ErrorKind::kNoRainbow: return "NoRainbow";
    case ErrorKind::kZigZagNotFound: return "ZigZagNotFound";
  }
  return "Unknown";
}

}  // namespace costshare
