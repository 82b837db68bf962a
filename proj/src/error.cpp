#include "nslab/error.hpp"

namespace nslab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonZeroMean: return "NonZeroMean";
    case ErrorKind::NotDivergenceFree: return "NotDivergenceFree";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::EmptyShell: return "EmptyShell";
    case ErrorKind::ShellNotResolved: return "ShellNotResolved";
    case ErrorKind::ZeroWavevector: return "ZeroWavevector";
    case ErrorKind::UnorderedRadii: return "UnorderedRadii";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::BadExponents: return "BadExponents";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::MeshMismatch: return "MeshMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace nslab
