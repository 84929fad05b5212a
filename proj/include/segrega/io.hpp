#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "segrega/boundary_datum.hpp"
#include "segrega/certification.hpp"
#include "segrega/harmonic_field.hpp"
#include "segrega/nodal_partition.hpp"
#include "segrega/pde_solver.hpp"

namespace segrega {

using Json = nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";

/// Deterministic JSON text: object keys sorted, doubles as %.17g (so every
/// double survives a parse), non-finite numbers as null.
std::string dump_json(const Json& value, int indent = 2);
/// Throws ParseError with the parser's position.
Json parse_json(std::string_view text);
Json read_json_file(const std::filesystem::path& path);

/// 64-bit FNV-1a over the compact dump, as 16 hex digits.
std::string config_hash(const Json& config);

/// Provenance stamped on every output file.
struct OutputHeader {
  std::string version = std::string(kVersion);
  std::string config_hash;
  Json to_json() const;
  /// "# segrega <version> config_hash=<hash>" comment line for CSV files.
  std::string csv_line() const;
};

Json datum_to_json(const AdmissibleDatum& datum);
/// Accepts the explicit schema {k, arcs, profiles}, or a shortcut object
/// {"symmetric": {k, phase?, amplitude?, shape?}} / {"cosine_mode": {s, amplitude?}}.
AdmissibleDatum datum_from_json(const Json& j, const DatumOptions& options = {});

Json moments_to_json(const MomentReport& report);
Json derivatives_to_json(const DerivativeReport& report);
Json stats_to_json(const SolveStats& stats);
Json critical_points_to_json(const CriticalSearchResult& result);

/// Regions are stored as runs [first_cell, length] of labelled cells.
Json partition_to_json(const NodalPartition& partition);

struct StoredPartition {
  PolarGrid grid;
  int k = 0;
  double amplitude = 0.0;
  double threshold_rel = 1e-3;
  std::vector<double> zeros;
  std::vector<int> labels;
};
/// Accepts a bare partition or a report holding one under "partition".
/// Throws ParseError for malformed input; region checks happen later, in
/// partition_from_labels.
StoredPartition partition_from_json(const Json& j);

/// Writes CSV with the header comment line, column names, and %.17g values.
void write_csv(const std::filesystem::path& path, const OutputHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Grid dump `r, theta, u_1..u_k`, one row per cell, ring-major.
void write_grid_dump(const std::filesystem::path& path, const OutputHeader& header, const DensityGrid& state);
/// Reads a grid dump back; the boundary comes from the datum.
DensityGrid read_grid_dump(const std::filesystem::path& path, const AdmissibleDatum& datum);

}  // namespace segrega
