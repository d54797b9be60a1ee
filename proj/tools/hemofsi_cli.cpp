//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "hemofsi/hemofsi.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<double> dt;
  std::optional<int> steps;
  std::string snapshot;
  bool quiet = false;
};

using ConfigPtr = std::unique_ptr<hfsi_config, decltype(&hfsi_config_free)>;

int report(hfsi_status s) {
  if (s != HFSI_OK) std::fprintf(stderr, "hemofsi: error: %s\n", hfsi_last_error());
  return static_cast<int>(s);
}

void log_line(const char* message, void* user) {
  if (!*static_cast<bool*>(user)) std::fprintf(stderr, "%s\n", message);
}

// Loads the configuration and applies the command-line overrides.
hfsi_status make_config(const Options& o, ConfigPtr& cfg) {
  hfsi_config* raw = nullptr;
  hfsi_status s = o.config.empty() ? hfsi_config_default(&raw) : hfsi_config_load(o.config.c_str(), &raw);
  cfg.reset(raw);
  if (s != HFSI_OK) return s;
  if (o.dt && (s = hfsi_config_set_dt(cfg.get(), *o.dt)) != HFSI_OK) return s;
  if (!o.out.empty() && (s = hfsi_config_set_output(cfg.get(), o.out.c_str())) != HFSI_OK) return s;
  return HFSI_OK;
}

int cmd_mesh(const Options& o) {
  ConfigPtr cfg(nullptr, &hfsi_config_free);
  if (hfsi_status s = make_config(o, cfg); s != HFSI_OK) return report(s);
  hfsi_mesh_info info{};
  if (hfsi_status s = hfsi_mesh(cfg.get(), nullptr, &info); s != HFSI_OK) return report(s);
  if (!o.quiet) {
    std::printf("vertices %zu\ntriangles %zu (lumen %zu, wall %zu)\nmin quality %.4f\n", info.vertices,
                info.triangles, info.lumen_triangles, info.wall_triangles, info.min_quality);
  }
  return 0;
}

int cmd_run(Options o) {
  ConfigPtr cfg(nullptr, &hfsi_config_free);
  if (hfsi_status s = make_config(o, cfg); s != HFSI_OK) return report(s);
  hfsi_run_summary sum{};
  const hfsi_status s = hfsi_run(cfg.get(), o.steps.value_or(-1), &log_line, &o.quiet, &sum);
  if (s != HFSI_OK) return report(s);
  if (!o.quiet) {
    std::printf("steps %d, final time %.4g s\n", sum.steps, sum.final_time);
    std::printf("max speed %.4g cm/s, min jacobian %.4g, worst flux imbalance %.3g\n", sum.max_speed,
                sum.min_jacobian, sum.worst_flux_imbalance);
    if (sum.detected) {
      std::printf("region: %d triangles, area %.4g cm^2, centroid (%.4g, %.4g)\n", sum.region_triangles,
                  sum.region_area, sum.region_centroid[0], sum.region_centroid[1]);
      std::printf("clot solves %d\n", sum.clot_solves);
    }
    if (sum.warnings > 0) std::printf("%d warning(s), see summary.json\n", sum.warnings);
  }
  return 0;
}

int cmd_detect(const Options& o) {
  ConfigPtr cfg(nullptr, &hfsi_config_free);
  if (hfsi_status s = make_config(o, cfg); s != HFSI_OK) return report(s);
  hfsi_region_info info{};
  if (hfsi_status s = hfsi_detect(cfg.get(), o.snapshot.c_str(), nullptr, &info); s != HFSI_OK) return report(s);
  if (!o.quiet) {
    std::printf("region: %d triangles in %d candidate component(s), area %.4g cm^2, centroid (%.4g, %.4g)\n",
                info.triangles, info.candidate_components, info.area, info.centroid[0], info.centroid[1]);
  }
  return 0;
}

int cmd_rupture(const Options& o) {
  ConfigPtr cfg(nullptr, &hfsi_config_free);
  if (hfsi_status s = make_config(o, cfg); s != HFSI_OK) return report(s);
  hfsi_rupture_info info{};
  if (hfsi_status s = hfsi_rupture(cfg.get(), o.snapshot.c_str(), nullptr, &info); s != HFSI_OK) return report(s);
  if (!o.quiet) {
    std::printf("zone area %.4g cm^2\n", info.area);
    std::printf("mean |u|: zone %.4g, gamma1 %.4g, gamma2 %.4g cm\n", info.displacement_zone,
                info.displacement_gamma1, info.displacement_gamma2);
    std::printf("gamma1 traction %.4g dyn/cm^2, gamma1 max shear %.4g dyn/cm^2\n", info.traction_gamma1,
                info.max_shear_gamma1);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D fluid-structure simulation of blood flow in a stenosed artery"};
  app.set_version_flag("--version", std::string(hfsi_version()));
  app.require_subcommand(1);

  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "JSON configuration file (defaults when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "Output directory (overrides output.directory)");
    sub->add_option("--dt", o.dt, "Time step in seconds (overrides time.dt)");
    sub->add_flag("-q,--quiet", o.quiet, "Suppress progress and summary output");
  };

  CLI::App* mesh = app.add_subcommand("mesh", "Build the mesh and write mesh.txt and mesh.vtk");
  common(mesh);
  CLI::App* run = app.add_subcommand("run", "Run the coupled simulation, detection and rupture stages");
  common(run);
  run->add_option("-n,--steps", o.steps, "Number of time steps (overrides time.end_time)")
      ->check(CLI::NonNegativeNumber);
  CLI::App* detect = app.add_subcommand("detect", "Threshold the averaged fields of a snapshot");
  common(detect);
  detect->add_option("-s,--snapshot", o.snapshot, "Snapshot directory written by run")
      ->required()
      ->check(CLI::ExistingDirectory);
  CLI::App* rupture = app.add_subcommand("rupture", "Solve the clot problem on the region of a snapshot");
  common(rupture);
  rupture->add_option("-s,--snapshot", o.snapshot, "Snapshot directory written by run")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return HFSI_ERR_CONFIG;
  }

  if (mesh->parsed()) return cmd_mesh(o);
  if (run->parsed()) return cmd_run(o);
  if (detect->parsed()) return cmd_detect(o);
  return cmd_rupture(o);
}
