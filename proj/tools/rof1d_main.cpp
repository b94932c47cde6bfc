// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

#include "rof1d/rof1d.h"

namespace {

enum Exit { kSuccess = 0, kVerdictFailure = 1, kUsage = 2 };

int finish(rof1d_status st, rof1d_report* rep) {
  if (st != ROF1D_OK) {
    std::fprintf(stderr, "rof1d: %s: %s\n", rof1d_status_string(st), rof1d_last_error());
    return st == ROF1D_PARSE || st == ROF1D_INVALID_ARGUMENT ? kUsage : kVerdictFailure;
  }
  std::fputs(rof1d_report_summary(rep), stdout);
  std::printf("files written: %zu\n", rof1d_report_file_count(rep));
  const int passed = rof1d_report_passed(rep);
  std::fprintf(stderr, "%s: %s in %.3f s\n", rof1d_report_name(rep), passed ? "pass" : "FAIL",
               rof1d_report_wall_seconds(rep));
  rof1d_report_destroy(rep);
  return passed ? kSuccess : kVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed-Dirichlet ROF minimizers and exact total variation flow in 1-D"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rof1d_version()));

  std::string scenario, out_dir, preset;
  bool svg = false, rational = false;
  std::optional<double> k;

  auto* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("scenario", scenario, "scenario file (YAML)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--svg", svg, "also write plot.svg");
  run->add_flag("--rational", rational, "exact rational arithmetic for the flow");

  auto* pre = app.add_subcommand("preset", "run a built-in scenario");
  pre->add_option("name", preset, "preset name (see 'list')")->required();
  pre->add_option("--k", k, "example parameter");
  pre->add_option("--out", out_dir, "output directory")->required();
  pre->add_flag("--svg", svg, "also write plot.svg");
  pre->add_flag("--rational", rational, "exact rational arithmetic for the flow");

  auto* list = app.add_subcommand("list", "list presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const unsigned flags = (svg ? ROF1D_RUN_SVG : 0u) | (rational ? ROF1D_RUN_RATIONAL : 0u);
  rof1d_report* rep = nullptr;
  if (*list) {
    for (size_t i = 0; i < rof1d_preset_count(); ++i) {
      std::printf("%-20s %s%s\n", rof1d_preset_name(i), rof1d_preset_description(i),
                  rof1d_preset_takes_k(i) ? " [--k]" : "");
    }
    return kSuccess;
  }
  const rof1d_status st =
      *run ? rof1d_run_scenario(scenario.c_str(), out_dir.c_str(), flags, &rep)
           : rof1d_run_preset(preset.c_str(), k.has_value(), k.value_or(0.0), out_dir.c_str(),
                              flags, &rep);
  return finish(st, rep);
}
