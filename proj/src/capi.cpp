#include "rof1d/rof1d.h"

#include <exception>
#include <limits>
#include <new>
#include <string>

#include "rof1d/attain.hpp"
#include "rof1d/rofsolve.hpp"
#include "rof1d/scenario.hpp"
#include "rof1d/tvflow.hpp"

struct rof1d_step {
  rof1d::StepFunction fn;
};

struct rof1d_report {
  rof1d::RunReport report;
  std::vector<std::string> files;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

rof1d_status from_code(rof1d::ErrorCode c) {
  using rof1d::ErrorCode;
  switch (c) {
    case ErrorCode::invalid_argument: return ROF1D_INVALID_ARGUMENT;
    case ErrorCode::not_converged: return ROF1D_NOT_CONVERGED;
    case ErrorCode::structural: return ROF1D_STRUCTURAL;
    case ErrorCode::solver_bug: return ROF1D_SOLVER_BUG;
    case ErrorCode::parse: return ROF1D_PARSE;
    case ErrorCode::io: return ROF1D_IO;
  }
  return ROF1D_INTERNAL;
}

rof1d_status fail(rof1d_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class Fn>
rof1d_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return ROF1D_OK;
  } catch (const rof1d::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ROF1D_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ROF1D_INTERNAL, e.what());
  } catch (...) {
    return fail(ROF1D_INTERNAL, "unknown exception");
  }
}

#define ROF1D_REQUIRE(cond, what) \
  if (!(cond)) return fail(ROF1D_INVALID_ARGUMENT, what)

rof1d_report* wrap(rof1d::RunReport r) {
  auto* out = new rof1d_report{std::move(r), {}, {}};
  for (const auto& p : out->report.files) out->files.push_back(p.string());
  for (const auto& [k, v] : out->report.summary) out->summary += k + ": " + v + "\n";
  return out;
}

rof1d::RunOverrides overrides(unsigned flags) {
  return {(flags & ROF1D_RUN_SVG) != 0, (flags & ROF1D_RUN_RATIONAL) != 0};
}

}  // namespace

extern "C" {

const char* rof1d_version(void) { return "1.0.0"; }

const char* rof1d_status_string(rof1d_status s) {
  switch (s) {
    case ROF1D_OK: return "ok";
    case ROF1D_INVALID_ARGUMENT: return "invalid argument";
    case ROF1D_NOT_CONVERGED: return "not converged";
    case ROF1D_STRUCTURAL: return "structural error";
    case ROF1D_SOLVER_BUG: return "solver bug";
    case ROF1D_PARSE: return "parse error";
    case ROF1D_IO: return "i/o error";
    case ROF1D_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rof1d_last_error(void) { return g_last_error.c_str(); }

rof1d_status rof1d_step_create(double length, const double* breakpoints, const double* values,
                               size_t n_values, rof1d_step** out) {
  ROF1D_REQUIRE(out, "out must not be NULL");
  ROF1D_REQUIRE(values && n_values > 0, "values must be a non-empty array");
  ROF1D_REQUIRE(breakpoints || n_values == 1, "breakpoints required for more than one value");
  return guarded([&] {
    std::vector<double> bps(breakpoints, breakpoints + (n_values - 1));
    std::vector<double> vals(values, values + n_values);
    *out = new rof1d_step{rof1d::StepFunction(length, std::move(bps), std::move(vals))};
  });
}

void rof1d_step_destroy(rof1d_step* u) { delete u; }

size_t rof1d_step_size(const rof1d_step* u) { return u ? u->fn.size() : 0; }

double rof1d_step_length(const rof1d_step* u) {
  return u ? u->fn.length() : std::numeric_limits<double>::quiet_NaN();
}

rof1d_status rof1d_step_values(const rof1d_step* u, double* out, size_t cap) {
  ROF1D_REQUIRE(u && (out || cap == 0), "NULL argument");
  const auto v = u->fn.values();
  for (size_t i = 0; i < v.size() && i < cap; ++i) out[i] = v[i];
  return ROF1D_OK;
}

rof1d_status rof1d_step_breakpoints(const rof1d_step* u, double* out, size_t cap) {
  ROF1D_REQUIRE(u && (out || cap == 0), "NULL argument");
  const auto b = u->fn.breakpoints();
  for (size_t i = 0; i < b.size() && i < cap; ++i) out[i] = b[i];
  return ROF1D_OK;
}

rof1d_status rof1d_solve(const rof1d_step* f, double lambda, double a, double b,
                         rof1d_step** minimizer, double* energy, int* certificate_feasible) {
  ROF1D_REQUIRE(f && minimizer, "NULL argument");
  return guarded([&] {
    rof1d::SolveReport r = rof1d::solve_rof({f->fn, lambda, {a, b}});
    if (energy) *energy = r.energy;
    if (certificate_feasible) *certificate_feasible = r.certificate.feasible ? 1 : 0;
    *minimizer = new rof1d_step{std::move(r.minimizer)};
  });
}

rof1d_status rof1d_evolve(const rof1d_step* f, double a, double b, int rational,
                          rof1d_step** terminal, double* t_ext) {
  ROF1D_REQUIRE(f && terminal, "NULL argument");
  return guarded([&] {
    rof1d::FlowOptions o;
    o.rational = rational != 0;
    rof1d::FlowTrajectory traj = rof1d::evolve(f->fn, {a, b}, o);
    if (t_ext) *t_ext = traj.t_ext;
    *terminal = new rof1d_step{std::move(traj.terminal)};
  });
}

rof1d_status rof1d_lambda_threshold(const rof1d_step* f, double a, double b, double* out) {
  ROF1D_REQUIRE(f && out, "NULL argument");
  return guarded([&] { *out = rof1d::lambda_threshold(f->fn, {a, b}); });
}

rof1d_status rof1d_run_scenario(const char* path, const char* out_dir, unsigned flags,
                                rof1d_report** out) {
  ROF1D_REQUIRE(path && out_dir && out, "NULL argument");
  return guarded([&] { *out = wrap(rof1d::run_file(path, out_dir, overrides(flags))); });
}

rof1d_status rof1d_run_preset(const char* name, int has_k, double k, const char* out_dir,
                              unsigned flags, rof1d_report** out) {
  ROF1D_REQUIRE(name && out_dir && out, "NULL argument");
  return guarded([&] {
    std::optional<double> kk;
    if (has_k) kk = k;
    *out = wrap(rof1d::run_preset(name, kk, out_dir, overrides(flags)));
  });
}

void rof1d_report_destroy(rof1d_report* r) { delete r; }
int rof1d_report_passed(const rof1d_report* r) { return r && r->report.passed ? 1 : 0; }
const char* rof1d_report_name(const rof1d_report* r) { return r ? r->report.name.c_str() : ""; }
double rof1d_report_wall_seconds(const rof1d_report* r) { return r ? r->report.wall_seconds : 0.0; }
size_t rof1d_report_file_count(const rof1d_report* r) { return r ? r->files.size() : 0; }

const char* rof1d_report_file(const rof1d_report* r, size_t i) {
  return r && i < r->files.size() ? r->files[i].c_str() : nullptr;
}

const char* rof1d_report_summary(const rof1d_report* r) { return r ? r->summary.c_str() : ""; }

size_t rof1d_preset_count(void) { return rof1d::list_presets().size(); }

const char* rof1d_preset_name(size_t i) {
  const auto& p = rof1d::list_presets();
  return i < p.size() ? p[i].name.c_str() : nullptr;
}

const char* rof1d_preset_description(size_t i) {
  const auto& p = rof1d::list_presets();
  return i < p.size() ? p[i].description.c_str() : nullptr;
}

int rof1d_preset_takes_k(size_t i) {
  const auto& p = rof1d::list_presets();
  return i < p.size() && p[i].takes_k ? 1 : 0;
}

}  // extern "C"
