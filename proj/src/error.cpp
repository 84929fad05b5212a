#include "segrega/error.hpp"

namespace segrega {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::GapOnCircle: return "GapOnCircle";
    case ErrorCode::NegativeProfile: return "NegativeProfile";
    case ErrorCode::NonLipschitzProfile: return "NonLipschitzProfile";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidArc: return "InvalidArc";
    case ErrorCode::OddSpeciesCount: return "OddSpeciesCount";
    case ErrorCode::SpeciesCountNot6: return "SpeciesCountNot6";
    case ErrorCode::NegativeDegree: return "NegativeDegree";
    case ErrorCode::PoleOnDisk: return "PoleOnDisk";
    case ErrorCode::EmptyRule: return "EmptyRule";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::TooManyCriticalPoints: return "TooManyCriticalPoints";
    case ErrorCode::DegenerateDatum: return "DegenerateDatum";
    case ErrorCode::OddMultiplicityPresent: return "OddMultiplicityPresent";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NegativityViolation: return "NegativityViolation";
    case ErrorCode::EmptySchedule: return "EmptySchedule";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::DisconnectedRegion: return "DisconnectedRegion";
    case ErrorCode::MissingRegion: return "MissingRegion";
    case ErrorCode::UnstableMultiplicity: return "UnstableMultiplicity";
    case ErrorCode::EulerViolation: return "EulerViolation";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::UnclassifiableMultiset: return "UnclassifiableMultiset";
    case ErrorCode::FitFailure: return "FitFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace segrega
