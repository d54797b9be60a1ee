/*-----------------------------------------------------------------------------
 * Copyright 2026 The hemofsi authors
 * SPDX-License-Identifier: Apache-2.0
 *---------------------------------------------------------------------------*/
#ifndef HEMOFSI_H
#define HEMOFSI_H

#include <stddef.h>

#if defined(_WIN32)
#define HFSI_API __declspec(dllexport)
#else
#define HFSI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The CLI exit code is the status for the first four. */
typedef enum hfsi_status {
  HFSI_OK = 0,
  HFSI_ERR_CONFIG = 1,   /* invalid configuration or arguments */
  HFSI_ERR_SOLVER = 2,   /* solver or mesh failure */
  HFSI_ERR_IO = 3,       /* unreadable input or unwritable output */
  HFSI_ERR_INTERNAL = 4  /* anything else */
} hfsi_status;

/* Message of the most recent failure on the calling thread; empty after a
 * success. Valid until the next call on the same thread. */
HFSI_API const char* hfsi_last_error(void);
HFSI_API const char* hfsi_version(void);

typedef struct hfsi_config hfsi_config;

HFSI_API hfsi_status hfsi_config_default(hfsi_config** out);
HFSI_API hfsi_status hfsi_config_load(const char* path, hfsi_config** out);
HFSI_API hfsi_status hfsi_config_parse(const char* json_text, hfsi_config** out);
HFSI_API void hfsi_config_free(hfsi_config* cfg);
HFSI_API hfsi_status hfsi_config_set_output(hfsi_config* cfg, const char* directory);
/* Changes time.dt and revalidates. */
HFSI_API hfsi_status hfsi_config_set_dt(hfsi_config* cfg, double dt);
HFSI_API hfsi_status hfsi_config_get_dt(const hfsi_config* cfg, double* dt);
/* Resolved configuration as JSON. Copies at most `capacity` bytes including
 * the terminator; `needed` receives the full size with terminator. */
HFSI_API hfsi_status hfsi_config_dump(const hfsi_config* cfg, char* buffer, size_t capacity, size_t* needed);

typedef void (*hfsi_log_fn)(const char* message, void* user);

typedef struct hfsi_mesh_info {
  size_t vertices;
  size_t triangles;
  size_t lumen_triangles;
  size_t wall_triangles;
  double min_quality;
} hfsi_mesh_info;

/* Builds the configured mesh and writes mesh.txt and mesh.vtk to `out_dir`
 * (the configured output directory when NULL). */
HFSI_API hfsi_status hfsi_mesh(const hfsi_config* cfg, const char* out_dir, hfsi_mesh_info* info);

typedef struct hfsi_run_summary {
  int steps;
  double final_time;
  int detected;
  int region_triangles;
  double region_area;
  double region_centroid[2];
  int clot_solves;
  double max_speed;
  double min_jacobian;
  double worst_flux_imbalance;
  int warnings;
} hfsi_run_summary;

/* Full pipeline. steps < 0 runs to the configured end time. Progress and
 * warnings go to `log` when it is not NULL. */
HFSI_API hfsi_status hfsi_run(const hfsi_config* cfg, int steps, hfsi_log_fn log, void* user,
                              hfsi_run_summary* summary);

typedef struct hfsi_region_info {
  int triangles;
  int candidate_components;
  double area;
  double centroid[2];
} hfsi_region_info;

/* Thresholding on a saved snapshot with the configured thresholds. */
HFSI_API hfsi_status hfsi_detect(const hfsi_config* cfg, const char* snapshot_dir, const char* out_dir,
                                 hfsi_region_info* info);

typedef struct hfsi_rupture_info {
  double area;
  double displacement_zone;
  double displacement_gamma1;
  double displacement_gamma2;
  double traction_gamma1;
  double max_shear_gamma1;
} hfsi_rupture_info;

/* Detection followed by one clot solve on a saved snapshot. */
HFSI_API hfsi_status hfsi_rupture(const hfsi_config* cfg, const char* snapshot_dir, const char* out_dir,
                                  hfsi_rupture_info* info);

/* Pointwise constitutive helpers in the units of the configuration. */
HFSI_API hfsi_status hfsi_carreau_viscosity(const hfsi_config* cfg, double shear_rate, double* mu);
HFSI_API hfsi_status hfsi_inlet_velocity(const hfsi_config* cfg, double t, double* velocity);
HFSI_API hfsi_status hfsi_clot_lame(const hfsi_config* cfg, double* mu, double* lambda);

#ifdef __cplusplus
}
#endif

#endif /* HEMOFSI_H */
