/*-----------------------------------------------------------------------------
 * Copyright 2026 The hemofsi authors
 * SPDX-License-Identifier: Apache-2.0
 *---------------------------------------------------------------------------*/
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "hemofsi/hemofsi.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void count_lines(const char* message, void* user) {
  (void)message;
  ++*(int*)user;
}

int main(void) {
  hfsi_config* cfg = NULL;
  EXPECT(hfsi_config_default(&cfg) == HFSI_OK);
  EXPECT(strcmp(hfsi_last_error(), "") == 0);

  double dt = 0.0;
  EXPECT(hfsi_config_get_dt(cfg, &dt) == HFSI_OK && dt == 0.01);
  EXPECT(hfsi_config_set_dt(cfg, -1.0) == HFSI_ERR_CONFIG);
  EXPECT(strstr(hfsi_last_error(), "time.dt") != NULL);
  EXPECT(hfsi_config_get_dt(cfg, &dt) == HFSI_OK && dt == 0.01);
  EXPECT(hfsi_config_get_dt(NULL, &dt) == HFSI_ERR_CONFIG);

  size_t needed = 0;
  EXPECT(hfsi_config_dump(cfg, NULL, 0, &needed) == HFSI_OK && needed > 2);
  char* text = malloc(needed);
  EXPECT(hfsi_config_dump(cfg, text, needed, NULL) == HFSI_OK);
  EXPECT(strlen(text) + 1 == needed && text[0] == '{');
  hfsi_config* again = NULL;
  EXPECT(hfsi_config_parse(text, &again) == HFSI_OK);
  hfsi_config_free(again);
  free(text);

  double mu = 0.0, lambda = 0.0, v = 0.0;
  EXPECT(hfsi_carreau_viscosity(cfg, 0.0, &mu) == HFSI_OK && mu == 0.056);
  EXPECT(hfsi_carreau_viscosity(cfg, -1.0, &mu) == HFSI_ERR_CONFIG);
  EXPECT(hfsi_inlet_velocity(cfg, 0.25, &v) == HFSI_OK && fabs(v - 5.0) < 1e-12);
  EXPECT(hfsi_clot_lame(cfg, &mu, &lambda) == HFSI_OK);
  EXPECT(fabs(mu - 14.5 / (2.0 * 1.492)) < 1e-12);

  hfsi_config* bad = NULL;
  EXPECT(hfsi_config_parse("{\"time\": {\"dt\": 0}}", &bad) == HFSI_ERR_CONFIG && bad == NULL);
  EXPECT(hfsi_config_parse("{broken", &bad) == HFSI_ERR_CONFIG);
  EXPECT(hfsi_config_load("/nonexistent/hemofsi.json", &bad) == HFSI_ERR_IO);

  hfsi_config* coarse = NULL;
  EXPECT(hfsi_config_parse("{\"geometry\": {\"mesh_size\": 0.3}, \"time\": {\"detection_time\": 0.02, "
                           "\"end_time\": 0.03}, \"output\": {\"directory\": \"capi_out\"}}",
                           &coarse) == HFSI_OK);
  hfsi_mesh_info info;
  EXPECT(hfsi_mesh(coarse, "capi_mesh", &info) == HFSI_OK);
  EXPECT(info.triangles == info.lumen_triangles + info.wall_triangles && info.lumen_triangles > 0);
  EXPECT(info.min_quality > 0.0);

  hfsi_run_summary sum;
  int lines = 0;
  EXPECT(hfsi_run(coarse, -1, count_lines, &lines, &sum) == HFSI_OK);
  EXPECT(sum.steps == 3 && sum.detected == 1 && sum.min_jacobian > 0.0);

  hfsi_region_info region;
  EXPECT(hfsi_detect(coarse, "capi_out/snapshot_t0", "capi_detect", &region) == HFSI_OK);
  EXPECT(region.triangles == sum.region_triangles);
  EXPECT(hfsi_detect(coarse, "capi_out/missing", NULL, &region) == HFSI_ERR_IO);

  hfsi_config_free(coarse);
  hfsi_config_free(cfg);
  hfsi_config_free(NULL);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
