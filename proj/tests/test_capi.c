/* Exercises the C interface from C. Exits nonzero on the first failure. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "rof1d/rof1d.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(int argc, char** argv) {
  const char* out_dir = argc > 1 ? argv[1] : "capi_out";
  const double bps[] = {0.5, 1.0, 1.5};
  const double vals[] = {0.0, -4.0, 4.0, 0.0};
  rof1d_step* f = NULL;
  EXPECT(rof1d_step_create(2.0, bps, vals, 4, &f) == ROF1D_OK);
  EXPECT(rof1d_step_size(f) == 4);
  EXPECT(rof1d_step_length(f) == 2.0);

  rof1d_step* u = NULL;
  double energy = 0.0;
  int feasible = 0;
  EXPECT(rof1d_solve(f, 0.25, -1.0, 1.0, &u, &energy, &feasible) == ROF1D_OK);
  EXPECT(feasible == 1);
  EXPECT(rof1d_step_size(u) == 2);
  double uv[2] = {0, 0}, ub[1] = {0};
  EXPECT(rof1d_step_values(u, uv, 2) == ROF1D_OK);
  EXPECT(rof1d_step_breakpoints(u, ub, 1) == ROF1D_OK);
  EXPECT(fabs(uv[0] + 1.0) < 1e-12 && fabs(uv[1] - 1.0) < 1e-12);
  EXPECT(ub[0] == 1.0);
  rof1d_step_destroy(u);

  rof1d_step* term = NULL;
  double t_ext = -1.0;
  EXPECT(rof1d_evolve(f, -1.0, 1.0, 1, &term, &t_ext) == ROF1D_OK);
  EXPECT(t_ext == 0.75);
  rof1d_step_destroy(term);

  double thr = 0.0;
  EXPECT(rof1d_lambda_threshold(f, -1.0, 1.0, &thr) == ROF1D_OK);
  EXPECT(fabs(thr - 0.5) < 1e-12);

  /* Errors carry a status and a message. */
  rof1d_step* bad = NULL;
  const double bad_bps[] = {1.5};
  EXPECT(rof1d_step_create(1.0, bad_bps, vals, 2, &bad) == ROF1D_INVALID_ARGUMENT);
  EXPECT(bad == NULL);
  EXPECT(strlen(rof1d_last_error()) > 0);
  EXPECT(rof1d_solve(f, 0.0, 0.0, 0.0, &u, NULL, NULL) == ROF1D_INVALID_ARGUMENT);
  EXPECT(rof1d_solve(NULL, 1.0, 0.0, 0.0, &u, NULL, NULL) == ROF1D_INVALID_ARGUMENT);
  EXPECT(strcmp(rof1d_status_string(ROF1D_PARSE), "parse error") == 0);
  rof1d_step_destroy(f);

  /* Presets and reports. */
  EXPECT(rof1d_preset_count() >= 9);
  EXPECT(strcmp(rof1d_preset_name(0), "example-s4") == 0);
  EXPECT(rof1d_preset_takes_k(0) == 1);
  EXPECT(rof1d_preset_name(1000) == NULL);

  rof1d_report* rep = NULL;
  EXPECT(rof1d_run_preset("example-s4", 1, 4.0, out_dir, 0, &rep) == ROF1D_OK);
  EXPECT(rof1d_report_passed(rep) == 1);
  EXPECT(strstr(rof1d_report_summary(rep), "T_ext: 0.75") != NULL);
  EXPECT(rof1d_report_file_count(rep) > 0);
  EXPECT(rof1d_report_file(rep, 0) != NULL);
  EXPECT(rof1d_report_file(rep, 100000) == NULL);
  EXPECT(strcmp(rof1d_report_name(rep), "example-s4") == 0);
  rof1d_report_destroy(rep);

  rep = NULL;
  EXPECT(rof1d_run_preset("missing", 0, 0.0, out_dir, 0, &rep) == ROF1D_INVALID_ARGUMENT);
  EXPECT(rep == NULL);
  EXPECT(rof1d_run_scenario("/nonexistent/scenario.yaml", out_dir, 0, &rep) == ROF1D_PARSE);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("all C API checks passed\n");
  return failures ? 1 : 0;
}
