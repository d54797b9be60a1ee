//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/hemofsi.h"

#include <cstring>
#include <new>
#include <string>

#include "hemofsi/error.hpp"
#include "hemofsi/pipeline.hpp"

struct hfsi_config {
  hemofsi::RunConfig cfg;
};

namespace {

thread_local std::string g_error;

hfsi_status fail(hfsi_status s, const char* what) {
  g_error = what;
  return s;
}

template <typename F>
hfsi_status guard(F&& body) {
  g_error.clear();
  try {
    body();
    return HFSI_OK;
  } catch (const hemofsi::ConfigError& e) {
    return fail(HFSI_ERR_CONFIG, e.what());
  } catch (const hemofsi::IoError& e) {
    return fail(HFSI_ERR_IO, e.what());
  } catch (const hemofsi::Error& e) {
    return fail(HFSI_ERR_SOLVER, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HFSI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HFSI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HFSI_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* name) {
  if (!p) throw hemofsi::ConfigError(std::string(name) + ": must not be NULL");
}

std::string out_or_default(const hfsi_config* cfg, const char* dir) { return dir ? dir : cfg->cfg.output.directory; }

}  // namespace

extern "C" {

const char* hfsi_last_error(void) { return g_error.c_str(); }

const char* hfsi_version(void) { return "0.1.0"; }

hfsi_status hfsi_config_default(hfsi_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new hfsi_config{};
  });
}

hfsi_status hfsi_config_load(const char* path, hfsi_config** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new hfsi_config{hemofsi::load_config(path)};
  });
}

hfsi_status hfsi_config_parse(const char* json_text, hfsi_config** out) {
  return guard([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = nullptr;
    *out = new hfsi_config{hemofsi::parse_config(json_text)};
  });
}

void hfsi_config_free(hfsi_config* cfg) { delete cfg; }

hfsi_status hfsi_config_set_output(hfsi_config* cfg, const char* directory) {
  return guard([&] {
    require(cfg, "cfg");
    require(directory, "directory");
    hemofsi::RunConfig next = cfg->cfg;
    next.output.directory = directory;
    next.validate();
    cfg->cfg = next;
  });
}

hfsi_status hfsi_config_set_dt(hfsi_config* cfg, double dt) {
  return guard([&] {
    require(cfg, "cfg");
    hemofsi::RunConfig next = cfg->cfg;
    next.coupling.fluid.dt = dt;
    next.validate();
    cfg->cfg = next;
  });
}

hfsi_status hfsi_config_get_dt(const hfsi_config* cfg, double* dt) {
  return guard([&] {
    require(cfg, "cfg");
    require(dt, "dt");
    *dt = cfg->cfg.coupling.fluid.dt;
  });
}

hfsi_status hfsi_config_dump(const hfsi_config* cfg, char* buffer, size_t capacity, size_t* needed) {
  return guard([&] {
    require(cfg, "cfg");
    const std::string text = hemofsi::dump_config(cfg->cfg);
    if (needed) *needed = text.size() + 1;
    if (buffer && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

hfsi_status hfsi_mesh(const hfsi_config* cfg, const char* out_dir, hfsi_mesh_info* info) {
  return guard([&] {
    require(cfg, "cfg");
    const std::string dir = out_or_default(cfg, out_dir);
    const hemofsi::Mesh mesh = hemofsi::build_stenosed_artery(cfg->cfg.geometry);
    hemofsi::ensure_directory(dir);
    hemofsi::write_mesh_text(mesh, dir + "/mesh.txt");
    std::vector<double> sub(mesh.num_triangles()), quality(mesh.num_triangles());
    for (std::size_t t = 0; t < sub.size(); ++t) {
      sub[t] = static_cast<double>(mesh.subdomain(static_cast<int>(t)));
      quality[t] = mesh.quality(static_cast<int>(t));
    }
    hemofsi::write_vtk(dir + "/mesh.vtk", mesh, {},
                       {hemofsi::cell_array("subdomain", sub), hemofsi::cell_array("quality", quality)});
    if (info) {
      info->vertices = mesh.num_vertices();
      info->triangles = mesh.num_triangles();
      info->lumen_triangles = 0;
      for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        if (mesh.subdomain(static_cast<int>(t)) == hemofsi::Subdomain::Lumen) ++info->lumen_triangles;
      }
      info->wall_triangles = info->triangles - info->lumen_triangles;
      info->min_quality = mesh.min_quality();
    }
  });
}

hfsi_status hfsi_run(const hfsi_config* cfg, int steps, hfsi_log_fn log, void* user, hfsi_run_summary* summary) {
  return guard([&] {
    require(cfg, "cfg");
    hemofsi::PipelineOptions opts;
    if (steps >= 0) opts.steps = steps;
    if (log) opts.log = [log, user](const std::string& m) { log(m.c_str(), user); };
    const hemofsi::PipelineSummary s = hemofsi::run_pipeline(cfg->cfg, opts);
    if (summary) {
      summary->steps = s.steps;
      summary->final_time = s.final_time;
      summary->detected = s.detected ? 1 : 0;
      summary->region_triangles = s.region_triangles;
      summary->region_area = s.region_area;
      summary->region_centroid[0] = s.region_centroid.x;
      summary->region_centroid[1] = s.region_centroid.y;
      summary->clot_solves = s.clot_solves;
      summary->max_speed = s.max_speed;
      summary->min_jacobian = s.min_jacobian;
      summary->worst_flux_imbalance = s.worst_flux_imbalance;
      summary->warnings = static_cast<int>(s.warnings.size());
    }
  });
}

hfsi_status hfsi_detect(const hfsi_config* cfg, const char* snapshot_dir, const char* out_dir, hfsi_region_info* info) {
  return guard([&] {
    require(cfg, "cfg");
    require(snapshot_dir, "snapshot_dir");
    const hemofsi::Snapshot snap = hemofsi::read_snapshot(snapshot_dir);
    const auto r = hemofsi::detect_from_snapshot(snap, cfg->cfg.detection, out_or_default(cfg, out_dir));
    if (info) {
      info->triangles = static_cast<int>(r.triangles.size());
      info->candidate_components = r.candidate_components;
      info->area = 0.0;
      for (int t : r.triangles) info->area += snap.mesh->area(t);
      const hemofsi::Point2 c = r.centroid(*snap.mesh);
      info->centroid[0] = c.x;
      info->centroid[1] = c.y;
    }
  });
}

hfsi_status hfsi_rupture(const hfsi_config* cfg, const char* snapshot_dir, const char* out_dir,
                         hfsi_rupture_info* info) {
  return guard([&] {
    require(cfg, "cfg");
    require(snapshot_dir, "snapshot_dir");
    hemofsi::Snapshot snap = hemofsi::read_snapshot(snapshot_dir);
    snap.sets["region"] = hemofsi::detect_from_snapshot(snap, cfg->cfg.detection).triangles;
    const hemofsi::ClotProblem prob = hemofsi::clot_problem_from_snapshot(snap, cfg->cfg.clot);
    const hemofsi::ZoneDiagnostics d =
        hemofsi::write_rupture_outputs(prob, hemofsi::clot_solve(prob), out_or_default(cfg, out_dir));
    if (info) {
      info->area = d.area;
      info->displacement_zone = d.displacement_zone;
      info->displacement_gamma1 = d.displacement_gamma1;
      info->displacement_gamma2 = d.displacement_gamma2;
      info->traction_gamma1 = d.traction_gamma1;
      info->max_shear_gamma1 = d.max_shear_gamma1;
    }
  });
}

hfsi_status hfsi_carreau_viscosity(const hfsi_config* cfg, double shear_rate, double* mu) {
  return guard([&] {
    require(cfg, "cfg");
    require(mu, "mu");
    if (!(shear_rate >= 0.0)) throw hemofsi::ConfigError("shear_rate: must be non-negative");
    *mu = hemofsi::carreau_viscosity(shear_rate, cfg->cfg.coupling.carreau);
  });
}

hfsi_status hfsi_inlet_velocity(const hfsi_config* cfg, double t, double* velocity) {
  return guard([&] {
    require(cfg, "cfg");
    require(velocity, "velocity");
    const auto& f = cfg->cfg.coupling.fluid;
    *velocity = hemofsi::inlet_profile(t, f.inlet_amplitude, f.waveform);
  });
}

hfsi_status hfsi_clot_lame(const hfsi_config* cfg, double* mu, double* lambda) {
  return guard([&] {
    require(cfg, "cfg");
    require(mu, "mu");
    require(lambda, "lambda");
    *mu = cfg->cfg.clot.mu();
    *lambda = cfg->cfg.clot.lambda();
  });
}

}  // extern "C"
