/* C interface to the rof1d library.
 *
 * Every function returning rof1d_status records a message retrievable with
 * rof1d_last_error() on failure (per thread). Handles are opaque and owned by
 * the caller; release them with the matching *_destroy function.
 */
#ifndef ROF1D_H
#define ROF1D_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ROF1D_BUILDING)
#    define ROF1D_API __declspec(dllexport)
#  else
#    define ROF1D_API __declspec(dllimport)
#  endif
#else
#  define ROF1D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rof1d_status {
  ROF1D_OK = 0,
  ROF1D_INVALID_ARGUMENT = 1,
  ROF1D_NOT_CONVERGED = 2,
  ROF1D_STRUCTURAL = 3,
  ROF1D_SOLVER_BUG = 4,
  ROF1D_PARSE = 5,
  ROF1D_IO = 6,
  ROF1D_INTERNAL = 7
} rof1d_status;

typedef struct rof1d_step rof1d_step;
typedef struct rof1d_report rof1d_report;

/* Flags for scenario runs. */
#define ROF1D_RUN_SVG 1u
#define ROF1D_RUN_RATIONAL 2u

ROF1D_API const char* rof1d_version(void);
ROF1D_API const char* rof1d_status_string(rof1d_status s);
/* Message of the last failure on this thread, "" if none. */
ROF1D_API const char* rof1d_last_error(void);

/* Step functions: n_values intervals on (0, length) split at n_values - 1
 * strictly increasing breakpoints. */
ROF1D_API rof1d_status rof1d_step_create(double length, const double* breakpoints,
                                         const double* values, size_t n_values,
                                         rof1d_step** out);
ROF1D_API void rof1d_step_destroy(rof1d_step* u);
ROF1D_API size_t rof1d_step_size(const rof1d_step* u);
ROF1D_API double rof1d_step_length(const rof1d_step* u);
/* Copy min(cap, size) values / size - 1 breakpoints into the buffer. */
ROF1D_API rof1d_status rof1d_step_values(const rof1d_step* u, double* out, size_t cap);
ROF1D_API rof1d_status rof1d_step_breakpoints(const rof1d_step* u, double* out, size_t cap);

/* Exact minimizer of the relaxed functional. certificate_feasible may be NULL. */
ROF1D_API rof1d_status rof1d_solve(const rof1d_step* f, double lambda, double a, double b,
                                   rof1d_step** minimizer, double* energy,
                                   int* certificate_feasible);
/* Total variation flow from f until extinction. */
ROF1D_API rof1d_status rof1d_evolve(const rof1d_step* f, double a, double b, int rational,
                                    rof1d_step** terminal, double* t_ext);
/* 2 / ||f - u_T||_1; +inf when f is terminal. */
ROF1D_API rof1d_status rof1d_lambda_threshold(const rof1d_step* f, double a, double b,
                                              double* out);

/* Scenario runs. A verdict failure is not an error: the call returns
 * ROF1D_OK and rof1d_report_passed() reports 0. */
ROF1D_API rof1d_status rof1d_run_scenario(const char* path, const char* out_dir,
                                          unsigned flags, rof1d_report** out);
/* has_k = 0 selects the preset's default parameter. */
ROF1D_API rof1d_status rof1d_run_preset(const char* name, int has_k, double k,
                                        const char* out_dir, unsigned flags,
                                        rof1d_report** out);
ROF1D_API void rof1d_report_destroy(rof1d_report* r);
ROF1D_API int rof1d_report_passed(const rof1d_report* r);
ROF1D_API const char* rof1d_report_name(const rof1d_report* r);
ROF1D_API double rof1d_report_wall_seconds(const rof1d_report* r);
ROF1D_API size_t rof1d_report_file_count(const rof1d_report* r);
ROF1D_API const char* rof1d_report_file(const rof1d_report* r, size_t i);
/* Summary as "key: value" lines. */
ROF1D_API const char* rof1d_report_summary(const rof1d_report* r);

ROF1D_API size_t rof1d_preset_count(void);
ROF1D_API const char* rof1d_preset_name(size_t i);
ROF1D_API const char* rof1d_preset_description(size_t i);
ROF1D_API int rof1d_preset_takes_k(size_t i);

#ifdef __cplusplus
}
#endif

#endif /* ROF1D_H */
