#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segrega/io.hpp"

namespace segrega {

struct Tolerances {
  double solver = 1e-8;
  double moment = 1e-8;
  double order = 1e-6;
  double derivative = 1e-8;
  /// Labelling threshold relative to the datum amplitude.
  double threshold = 1e-3;
  double exponent = 0.1;
  double fit_residual = 0.25;
  /// Median |pi - angle| and median magnitude mismatch of the reflection check.
  double reflection_angle = 0.05;
  double reflection_mismatch = 0.05;
  /// Membership and reconstruction: this many times the residual of r^3 cos 3theta.
  double harmonic_factor = 10.0;
};

struct ExperimentConfig {
  /// Datum in JSON form (a file reference is resolved on load).
  Json datum;
  int n_r = 128;
  int n_theta = 256;
  std::vector<double> mu_schedule = {1.0, 10.0, 100.0, 1000.0, 10000.0};
  int truncation = 256;
  int quadrature = 4096;
  int max_sweeps = 100000;
  Tolerances tol;
  std::optional<Complex> point;
  std::string out = "out";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// verify: "solve", "model" or "file".
  std::string source = "solve";
  std::string model;
  std::string partition;
  std::string grid_dump;
  /// verify: checks to run; empty means the default set for the source.
  std::vector<std::string> checks;
  /// certify: random data x random points equivalence sweep (0 disables it).
  int suite_data = 0;
  int suite_points = 20;
  /// solve: dump every step of the schedule instead of the last one only.
  bool dump_all_steps = false;

  Json to_json() const;
  /// to_json() without `out` and `threads`, which never change results.
  Json canonical() const;
  std::string hash() const { return config_hash(canonical()); }
  OutputHeader header() const { return {std::string(kVersion), hash()}; }
};

/// Defaults as a JSON document.
Json default_config();

/// Layers defaults < file < flags with JSON merge-patch and validates the
/// result; unknown keys and out-of-range values raise ConfigError. Paths in
/// the file layer (datum, partition, grid_dump) are relative to base_dir.
ExperimentConfig load_config(const Json& file, const Json& flags, const std::filesystem::path& base_dir = {});

/// Flag helpers: "128x256", "1,10,100", "0.3,0". Throw ConfigError.
Json parse_grid_flag(const std::string& text);
std::vector<double> parse_list_flag(const std::string& text);

}  // namespace segrega
