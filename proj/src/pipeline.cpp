//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

using json = nlohmann::ordered_json;

std::string step_name(const std::string& stem, int step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05d.vtk", stem.c_str(), step);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::vector<double> membership(std::size_t n, const std::vector<int>& tris) {
  std::vector<double> m(n, 0.0);
  for (int t : tris) m[static_cast<std::size_t>(t)] = 1.0;
  return m;
}

std::vector<double> recirculation_ids(const Field& v) {
  std::vector<double> ids(v.mesh().num_triangles(), 0.0);
  const auto zones = detect_recirculation(v);
  for (std::size_t z = 0; z < zones.size(); ++z) {
    for (int t : zones[z]) ids[static_cast<std::size_t>(t)] = static_cast<double>(z + 1);
  }
  return ids;
}

json region_json(const SolidificationRegion& r, const Mesh& mesh) {
  double area = 0.0;
  for (int t : r.triangles) area += mesh.area(t);
  const Point2 c = r.centroid(mesh);
  return {{"time", r.time},
          {"triangles", r.triangles.size()},
          {"area", area},
          {"centroid", {c.x, c.y}},
          {"candidate_components", r.candidate_components}};
}

json diagnostics_json(const ZoneDiagnostics& d, double t) {
  return {{"time", t},
          {"area", d.area},
          {"gamma1_length", d.gamma1_length},
          {"gamma2_length", d.gamma2_length},
          {"displacement_zone", d.displacement_zone},
          {"displacement_gamma1", d.displacement_gamma1},
          {"displacement_gamma2", d.displacement_gamma2},
          {"traction_gamma1", d.traction_gamma1},
          {"max_shear_gamma1", d.max_shear_gamma1}};
}

std::vector<Mat2> restrict_stress(const std::vector<Mat2>& all, const std::vector<int>& parents) {
  std::vector<Mat2> out;
  out.reserve(parents.size());
  for (int p : parents) out.push_back(all[static_cast<std::size_t>(p)]);
  return out;
}

Field restrict_vector(const FeSpace& zone_space, const Field& f, const std::vector<int>& parents) {
  Field out(zone_space);
  for (int n = 0; n < zone_space.num_nodes(); ++n) {
    out(n, 0) = f(parents[static_cast<std::size_t>(n)], 0);
    out(n, 1) = f(parents[static_cast<std::size_t>(n)], 1);
  }
  return out;
}

void write_zone_vtk(const std::string& path, const ClotSolution& sol, const ZoneDiagnostics& d) {
  write_vtk(path, sol.u.mesh(),
            {point_array("u", sol.u), point_array("lifting", sol.lifting), point_array("max_shear", d.max_shear)},
            {cell_array("parent_triangle",
                        std::vector<double>(sol.u.mesh().parent_triangles().begin(), sol.u.mesh().parent_triangles().end()))});
}

}  // namespace

SolidificationRegion detect_from_snapshot(const Snapshot& snap, const DetectionParams& params,
                                          const std::string& out_dir) {
  SolidificationRegion r = detect_regions(snap.field("mu_avg"), snap.field("speed_avg"), params);
  r.time = snap.time;
  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    const std::size_t nt = snap.mesh->num_triangles();
    std::vector<double> dmu(nt), dv(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      dmu[t] = r.high_viscosity[t];
      dv[t] = r.slow[t];
    }
    write_vtk(out_dir + "/region.vtk", *snap.mesh,
              {point_array("mu_avg", snap.field("mu_avg")), point_array("speed_avg", snap.field("speed_avg"))},
              {cell_array("region", membership(nt, r.triangles)), cell_array("high_viscosity", dmu),
               cell_array("slow", dv)});
    write_text(out_dir + "/region.json", region_json(r, *snap.mesh).dump(2) + "\n");
  }
  return r;
}

ClotProblem clot_problem_from_snapshot(const Snapshot& snap, const LameParams& lame) {
  const auto it = snap.sets.find("region");
  if (it == snap.sets.end() || it->second.empty()) throw Error("snapshot holds no solidification region");
  const auto zone = std::make_shared<const Mesh>(snap.mesh->extract_submesh(it->second));
  const auto parents = zone_parent_nodes(*zone, *snap.mesh);
  ClotProblem prob = ClotProblem::unloaded(zone, lame);
  prob.fluid_stress = restrict_stress(nodal_fluid_stress(snap.field("v"), snap.field("p"), snap.field("mu")), parents);
  if (snap.fields.contains("wall_increment")) {
    prob.wall_displacement = restrict_vector(prob.wall_displacement.space(), snap.field("wall_increment"), parents);
  }
  return prob;
}

ZoneDiagnostics write_rupture_outputs(const ClotProblem& prob, const ClotSolution& sol, const std::string& out_dir) {
  ensure_directory(out_dir);
  const ZoneDiagnostics d = zone_diagnostics(sol, prob.lame, prob.fluid_stress);
  write_zone_vtk(out_dir + "/zone.vtk", sol, d);
  write_text(out_dir + "/rupture.json", diagnostics_json(d, 0.0).dump(2) + "\n");
  return d;
}

PipelineSummary run_pipeline(const RunConfig& cfg, const PipelineOptions& opts) {
  cfg.validate();
  const LogFn log = opts.log ? opts.log : [](const std::string&) {};
  const std::string out = cfg.output.directory;
  ensure_directory(out);
  ensure_directory(out + "/vtk");
  write_text(out + "/config.json", dump_config(cfg));

  const int final_step = opts.steps.value_or(cfg.final_step());
  if (final_step < 0) throw ConfigError("steps: must be non-negative");
  const int detection_step = cfg.detection_step();
  const auto probes = cfg.probes.empty() ? default_probes(cfg.geometry) : cfg.probes;

  log("meshing");
  const auto global = std::make_shared<const Mesh>(build_stenosed_artery(cfg.geometry));
  write_mesh_text(*global, out + "/mesh.txt");
  CouplingState state = CouplingState::initial(global, cfg.coupling);
  log("mesh: " + std::to_string(state.lumen_ref->num_triangles()) + " lumen and " +
      std::to_string(state.wall_ref->num_triangles()) + " wall triangles");

  const FeSpace s1(state.fluid.mesh, 1, 1);
  AverageTracker averages(s1, cfg.coupling.carreau.mu0, speed_field(state.fluid.v), state.xi_f);

  std::vector<std::string> series_cols{"step", "time", "inlet_flux", "outlet_flux", "max_speed", "max_wall_displacement",
                                       "min_jacobian", "min_quality", "newton_iterations", "divergence",
                                       "interface_mismatch", "recirculation_zones"};
  CsvWriter series(out + "/series.csv", series_cols);
  std::vector<std::string> probe_cols{"step", "time"};
  for (const auto& p : probes) {
    for (const char* q : {"_mu", "_max_shear", "_speed"}) probe_cols.push_back(p.name + q);
  }
  CsvWriter probe_csv(out + "/probes.csv", probe_cols);
  CsvWriter rupture_csv;
  std::ofstream jsonl(out + "/diagnostics.jsonl", std::ios::binary);
  if (!jsonl) throw IoError("cannot open " + out + "/diagnostics.jsonl for writing");

  PipelineSummary summary;
  summary.min_jacobian = std::numeric_limits<double>::infinity();
  double max_inflow = 0.0;
  double max_imbalance = 0.0;

  std::vector<int> region;
  std::shared_ptr<const Mesh> zone;
  std::vector<int> zone_parents;
  Field xi_at_t0;

  const auto write_fields = [&](int step, const Field& max_shear) {
    const std::size_t nt = state.fluid.mesh->num_triangles();
    std::vector<VtkArray> cells{cell_array("recirculation", recirculation_ids(state.fluid.v))};
    if (!region.empty()) cells.push_back(cell_array("region", membership(nt, region)));
    write_vtk(out + "/vtk/" + step_name("lumen", step), *state.fluid.mesh,
              {point_array("velocity", state.fluid.v), point_array("pressure", state.fluid.p),
               point_array("viscosity", state.mu), point_array("max_shear", max_shear),
               point_array("mu_avg", averages.mu_avg()), point_array("speed_avg", averages.speed_avg()),
               point_array("ale_displacement", state.xi_f)},
              cells);
    write_vtk(out + "/vtk/" + step_name("wall", step), *state.wall_ref,
              {point_array("displacement", state.solid.xi), point_array("pressure", state.solid.p)});
  };

  const auto record = [&](int step, const StepDiagnostics* d) {
    const Field shear = max_shear_field(state.fluid.v, state.fluid.p, state.mu);
    if (step % cfg.output.csv_every == 0) {
      const double zones = static_cast<double>(detect_recirculation(state.fluid.v).size());
      if (d) {
        series.row({static_cast<double>(step), d->time, d->inlet_flux, d->outlet_flux, d->max_speed,
                    d->max_wall_displacement, d->min_jacobian, d->min_quality,
                    static_cast<double>(d->newton_iterations), d->divergence, d->interface_mismatch, zones});
      }
      std::vector<double> row{static_cast<double>(step), state.t};
      for (const auto& s : probe(state.mu, shear, state.fluid.v, probes)) {
        row.push_back(s.inside ? s.mu : std::nan(""));
        row.push_back(s.inside ? s.max_shear : std::nan(""));
        row.push_back(s.inside ? s.speed : std::nan(""));
      }
      probe_csv.row(row);
    }
    if (cfg.output.vtk_every > 0 && step % cfg.output.vtk_every == 0) write_fields(step, shear);
  };

  const auto detect = [&](int step) {
    DetectionParams params = cfg.detection;
    SolidificationRegion r =
        detect_regions(averages.mu_avg().rebased(state.fluid.mesh), averages.speed_avg().rebased(state.fluid.mesh), params);
    r.time = state.t;
    summary.detected = true;
    region = r.triangles;
    Snapshot snap;
    snap.mesh = state.fluid.mesh;
    snap.time = state.t;
    snap.fields.emplace("mu_avg", averages.mu_avg().rebased(snap.mesh));
    snap.fields.emplace("speed_avg", averages.speed_avg().rebased(snap.mesh));
    snap.fields.emplace("v", state.fluid.v);
    snap.fields.emplace("p", state.fluid.p);
    snap.fields.emplace("mu", state.mu.rebased(snap.mesh));
    snap.fields.emplace("ale_displacement", state.xi_f.rebased(snap.mesh));
    snap.sets.emplace("region", region);
    write_snapshot(out + "/snapshot_t0", snap);
    detect_from_snapshot(snap, params, out);
    if (region.empty()) {
      summary.warnings.push_back("empty solidification region at t0; rupture stage skipped");
      log("warning: " + summary.warnings.back());
      return;
    }
    summary.region_triangles = static_cast<int>(region.size());
    for (int t : region) summary.region_area += state.fluid.mesh->area(t);
    summary.region_centroid = r.centroid(*state.fluid.mesh);
    log("step " + std::to_string(step) + ": solidification region of " + std::to_string(region.size()) +
        " triangles, centroid x = " + format_double(summary.region_centroid.x));
    auto candidate = std::make_shared<const Mesh>(state.fluid.mesh->extract_submesh(region));
    if (candidate->labelled_edges(BoundaryLabel::ZoneGamma2).empty()) {
      summary.warnings.push_back("solidification region does not touch the vessel wall; rupture stage skipped");
      log("warning: " + summary.warnings.back());
      return;
    }
    zone = candidate;
    zone_parents = zone_parent_nodes(*zone, *state.fluid.mesh);
    xi_at_t0 = state.xi_f;
    rupture_csv = CsvWriter(out + "/rupture.csv", {"step", "time", "displacement_zone", "displacement_gamma1",
                                                   "displacement_gamma2", "traction_gamma1", "max_shear_gamma1"});
  };

  const auto rupture = [&](int step) {
    ClotProblem prob = ClotProblem::unloaded(zone, cfg.clot);
    prob.fluid_stress =
        restrict_stress(nodal_fluid_stress(state.fluid.v, state.fluid.p, state.mu.rebased(state.fluid.mesh)), zone_parents);
    const Field increment(state.xi_f.space(), state.xi_f.values() - xi_at_t0.values());
    prob.wall_displacement = restrict_vector(prob.wall_displacement.space(), increment, zone_parents);
    const ClotSolution sol = clot_solve(prob);
    const ZoneDiagnostics d = zone_diagnostics(sol, prob.lame, prob.fluid_stress);
    ++summary.clot_solves;
    rupture_csv.row({static_cast<double>(step), state.t, d.displacement_zone, d.displacement_gamma1,
                     d.displacement_gamma2, d.traction_gamma1, d.max_shear_gamma1});
    if (cfg.output.vtk_every > 0 && step % cfg.output.vtk_every == 0) {
      write_zone_vtk(out + "/vtk/" + step_name("zone", step), sol, d);
    }
  };

  const auto write_summary = [&](const std::string& status, const std::string& error) {
    json j{{"status", status},
           {"steps", summary.steps},
           {"final_time", summary.final_time},
           {"detected", summary.detected},
           {"region_triangles", summary.region_triangles},
           {"region_area", summary.region_area},
           {"region_centroid", {summary.region_centroid.x, summary.region_centroid.y}},
           {"clot_solves", summary.clot_solves},
           {"max_speed", summary.max_speed},
           {"min_jacobian", std::isfinite(summary.min_jacobian) ? json(summary.min_jacobian) : json()},
           {"worst_flux_imbalance", summary.worst_flux_imbalance},
           {"warnings", summary.warnings}};
    if (!error.empty()) j["error"] = error;
    write_text(out + "/summary.json", j.dump(2) + "\n");
  };

  try {
    record(0, nullptr);
    if (detection_step == 0 && final_step >= 0) detect(0);
    for (int step = 1; step <= final_step; ++step) {
      const StepDiagnostics d = coupling_step(state, cfg.coupling);
      summary.steps = step;
      summary.final_time = d.time;
      summary.max_speed = std::max(summary.max_speed, d.max_speed);
      summary.min_jacobian = std::min(summary.min_jacobian, d.min_jacobian);
      max_inflow = std::max(max_inflow, std::abs(d.inlet_flux));
      max_imbalance = std::max(max_imbalance, std::abs(d.inlet_flux - d.outlet_flux));
      summary.worst_flux_imbalance = max_inflow > 0.0 ? max_imbalance / max_inflow : 0.0;
      if (step <= detection_step) averages.update(state.mu, speed_field(state.fluid.v), state.xi_f);

      json line{{"step", d.step},
                {"time", d.time},
                {"newton_iterations", d.newton_iterations},
                {"newton_updates", d.newton_updates},
                {"newton_residual", d.newton_residual},
                {"divergence", d.divergence},
                {"min_quality", d.min_quality},
                {"min_jacobian", d.min_jacobian},
                {"inlet_flux", d.inlet_flux},
                {"outlet_flux", d.outlet_flux},
                {"max_speed", d.max_speed},
                {"max_wall_displacement", d.max_wall_displacement},
                {"interface_mismatch", d.interface_mismatch},
                {"viscosity_clamped", d.viscosity_clamped}};
      jsonl << line.dump() << '\n';
      record(step, &d);
      if (step == detection_step) detect(step);
      if (zone && step >= detection_step) rupture(step);
      if (step % 10 == 0 || step == final_step) {
        log("step " + std::to_string(step) + " t=" + format_double(d.time) + " newton=" +
            std::to_string(d.newton_iterations) + " max|v|=" + format_double(d.max_speed));
      }
    }
    if (!summary.detected) {
      summary.warnings.push_back("run ended before the detection time; no solidification analysis");
      log("warning: " + summary.warnings.back());
    }
  } catch (const Error& e) {
    jsonl.flush();
    series.flush();
    probe_csv.flush();
    write_summary("failed", e.what());
    throw;
  }
  jsonl.flush();
  if (!jsonl) throw IoError("write failed for " + out + "/diagnostics.jsonl");
  series.flush();
  probe_csv.flush();
  write_summary("ok", "");
  return summary;
}

}  // namespace hemofsi
