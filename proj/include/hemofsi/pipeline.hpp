//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hemofsi/config.hpp"
#include "hemofsi/io.hpp"
#include "hemofsi/rupture_solver.hpp"

namespace hemofsi {

using LogFn = std::function<void(const std::string&)>;

struct PipelineOptions {
  /// Overrides the configured final step when set.
  std::optional<int> steps;
  LogFn log;
};

struct PipelineSummary {
  int steps = 0;
  double final_time = 0.0;
  bool detected = false;       // the run reached the detection time
  int region_triangles = 0;
  double region_area = 0.0;
  Point2 region_centroid{};
  int clot_solves = 0;
  double max_speed = 0.0;
  double min_jacobian = 0.0;
  double worst_flux_imbalance = 0.0;  // max |in - out| / max(|in|, tiny)
  std::vector<std::string> warnings;
};

/// Mesh, coupled run with running averages, detection at t0 and the
/// rupture window [t0, T], writing every output under cfg.output.directory:
/// config.json, mesh.txt, diagnostics.jsonl, series.csv, probes.csv,
/// vtk/lumen_NNNNN.vtk, vtk/wall_NNNNN.vtk, snapshot_t0/, region.vtk,
/// rupture.csv, vtk/zone_NNNNN.vtk, summary.json.
/// Solver failures propagate as SolverError after the outputs written so
/// far are flushed.
PipelineSummary run_pipeline(const RunConfig& cfg, const PipelineOptions& opts = {});

/// Thresholding stage on a snapshot holding mu_avg and speed_avg. Writes
/// region.vtk and region.json into out_dir when it is non-empty.
SolidificationRegion detect_from_snapshot(const Snapshot& snap, const DetectionParams& params,
                                          const std::string& out_dir = {});

/// Zone of the "region" set of a snapshot with its fluid stress (from v, p,
/// mu) and ZoneGamma2 data (from the optional wall_increment field).
ClotProblem clot_problem_from_snapshot(const Snapshot& snap, const LameParams& lame);

/// Writes zone.vtk and rupture.json for one clot solve.
ZoneDiagnostics write_rupture_outputs(const ClotProblem& prob, const ClotSolution& sol, const std::string& out_dir);

}  // namespace hemofsi
