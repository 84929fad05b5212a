#pragma once

#include <string>

#include "segrega/config.hpp"
#include "segrega/error.hpp"

namespace segrega::cli {

inline constexpr int kOk = 0;
inline constexpr int kChecksFailed = 1;
inline constexpr int kNonConvergence = 2;
inline constexpr int kConfigError = 3;
inline constexpr int kDisagreement = 4;
inline constexpr int kFatal = 5;

int exit_code(ErrorCode code);

int cmd_solve(const ExperimentConfig& cfg);
int cmd_certify(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg);
int cmd_harmonic(const ExperimentConfig& cfg);
/// Prints the normalized datum as JSON on stdout.
int cmd_datum_validate(const ExperimentConfig& cfg);

}  // namespace segrega::cli
