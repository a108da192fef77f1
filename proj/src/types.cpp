#include "diracfk/types.hpp"

namespace diracfk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::UnivalenceViolation: return "UnivalenceViolation";
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::GenerationFailure: return "GenerationFailure";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::RepelFailure: return "RepelFailure";
    case ErrorKind::NoEigenvalueFound: return "NoEigenvalueFound";
    case ErrorKind::MassDegenerate: return "MassDegenerate";
    case ErrorKind::BadBracket: return "BadBracket";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace diracfk
