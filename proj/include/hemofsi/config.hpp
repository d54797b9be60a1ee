//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hemofsi/fsi_coupler.hpp"
#include "hemofsi/hemo_analysis.hpp"
#include "hemofsi/stenosis.hpp"

namespace hemofsi {

struct OutputConfig {
  std::string directory = "hemofsi_out";
  int vtk_every = 5;  // steps; 0 disables VTK snapshots
  int csv_every = 1;
};

/// Everything a pipeline run needs. Internal units: cm, s, g; viscosities
/// Pa*s, wall coefficients N/cm^2, clot modulus MPa.
struct RunConfig {
  StenosisGeometry geometry;
  CouplingConfig coupling;
  LameParams clot;
  DetectionParams detection;
  double detection_time = 3.0;  // t0
  double end_time = 4.0;        // T
  /// Empty selects default_probes(geometry).
  std::vector<ProbePoint> probes;
  OutputConfig output;

  /// Throws ConfigError prefixed with the offending key path.
  void validate() const;
  int detection_step() const;
  int final_step() const;
};

/// Parses a JSON document. Numeric keys accept a bare number in the key's
/// documented unit or a string "<value> <unit>". Unknown keys, unit
/// mismatches and invariant violations throw ConfigError naming the key.
/// An empty document yields the defaults.
RunConfig parse_config(std::string_view text);
/// Reads and parses a file; IoError when it cannot be read.
RunConfig load_config(const std::string& path);
/// The resolved configuration as JSON, every value in its documented unit.
std::string dump_config(const RunConfig& cfg);

/// Factor converting `unit` into the canonical unit of a quantity kind
/// ("length", "time", "velocity", "viscosity", "stress", "modulus",
/// "density", "wall_coefficient"). Throws ConfigError for a unit of another
/// kind.
double unit_factor(std::string_view kind, std::string_view unit);

}  // namespace hemofsi
