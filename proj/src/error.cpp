#include "raes/error.hpp"

namespace raes {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::GenerationFailure: return "generation-failure";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::ClassificationViolation: return "classification-violation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Decode: return "decode-error";
    case ErrorKind::Internal: return "internal-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

}  // namespace raes
