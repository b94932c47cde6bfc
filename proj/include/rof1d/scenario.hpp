#ifndef ROF1D_SCENARIO_HPP
#define ROF1D_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rof1d/core.hpp"

namespace rof1d {

enum class Task { solve, flow, attainment, threshold, counterexample, suite };
const char* to_string(Task t);

struct ScenarioOptions {
  bool rational = false;
  bool svg = false;
  std::size_t oracle_grid = 0;  // 0: no oracle cross-check
  std::string kind;             // task variant, see README
  std::optional<double> k;      // example parameter
  std::vector<double> eps;      // instability perturbations
  std::uint64_t seed = 1;
  std::size_t count = 20;       // instances per random suite
  double prox_dt = 0.0;         // 0: no implicit-Euler comparison
};

struct Scenario {
  std::string name;
  Task task = Task::solve;
  std::optional<StepFunction> f;
  std::optional<BoundaryPair> phi;
  std::optional<double> lambda;
  ScenarioOptions options;
};

/// Parses the YAML scenario text. Errors carry ErrorCode::parse and name the
/// offending line or field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
/// YAML text that parse_scenario maps back to the same scenario.
std::string dump_scenario(const Scenario& s);

struct RunReport {
  std::string name;
  Task task = Task::solve;
  bool passed = true;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::filesystem::path> files;

  /// Value for `key` in the summary, if present.
  std::optional<std::string> get(const std::string& key) const;
};

struct RunOverrides {
  bool svg = false;
  bool rational = false;
};

/// Executes the scenario and writes its artifacts into `out_dir` (created if
/// missing). Verdict failures set passed = false; module errors propagate.
RunReport run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                       const RunOverrides& overrides = {});
RunReport run_file(const std::filesystem::path& scenario_path,
                   const std::filesystem::path& out_dir, const RunOverrides& overrides = {});

struct PresetInfo {
  std::string name;
  std::string description;
  bool takes_k;
};

const std::vector<PresetInfo>& list_presets();
/// Throws ErrorCode::invalid_argument for unknown names.
Scenario make_preset(const std::string& name, std::optional<double> k = std::nullopt);
RunReport run_preset(const std::string& name, std::optional<double> k,
                     const std::filesystem::path& out_dir, const RunOverrides& overrides = {});

/// Shortest round-trip decimal text, with -0 printed as 0.
std::string format_number(double v);

}  // namespace rof1d

#endif  // ROF1D_SCENARIO_HPP
