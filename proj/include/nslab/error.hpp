#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nslab {

enum class ErrorKind {
  InvalidArgument,
  NonZeroMean,
  NotDivergenceFree,
  NegativeTime,
  NonPositiveTime,
  EmptyShell,
  ShellNotResolved,
  ZeroWavevector,
  UnorderedRadii,
  BadExponent,
  BadExponents,
  EmptyTrajectory,
  MeshMismatch,
  NoConvergence,
  DegenerateFit,
  Instability,
  BadConfig,
  ConditionViolated,
  Io,
  Syntax,
  Schema,
  BadMagic,
  TruncatedPayload,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nslab
