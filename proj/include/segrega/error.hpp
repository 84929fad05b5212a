#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segrega {

enum class ErrorCode {
  // boundary data
  OverlappingSupports,
  GapOnCircle,
  NegativeProfile,
  NonLipschitzProfile,
  InvalidProfile,
  InvalidArc,
  OddSpeciesCount,
  SpeciesCountNot6,
  // kernels
  NegativeDegree,
  PoleOnDisk,
  EmptyRule,
  BoundaryPoint,
  // harmonic field
  TruncationTooSmall,
  NewtonDivergence,
  TooManyCriticalPoints,
  // certification
  DegenerateDatum,
  OddMultiplicityPresent,
  // pde solver
  NonConvergence,
  NegativityViolation,
  EmptySchedule,
  InvalidSchedule,
  InvalidGrid,
  // nodal partition
  DisconnectedRegion,
  MissingRegion,
  UnstableMultiplicity,
  EulerViolation,
  IdentityViolation,
  UnclassifiableMultiset,
  FitFailure,
  // io / config
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace segrega
