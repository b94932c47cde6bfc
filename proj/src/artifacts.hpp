#ifndef ROF1D_SRC_ARTIFACTS_HPP
#define ROF1D_SRC_ARTIFACTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "rof1d/scenario.hpp"
#include "rof1d/subdiff.hpp"
#include "rof1d/tvflow.hpp"

namespace rof1d::detail {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

std::vector<std::pair<double, double>> step_polyline(const StepFunction& u);
std::vector<std::pair<double, double>> field_polyline(const DualField& z);

/// Writes artifacts into one directory and records them in the report.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, RunReport& report);

  void step_csv(const std::string& file, const StepFunction& u);
  void field_csv(const std::string& file, const DualField& z);
  void events_csv(const std::string& file, const FlowTrajectory& traj);
  /// Every epoch state and the terminal state, keyed by start time.
  void trajectory_csv(const std::string& file, const FlowTrajectory& traj);
  void text(const std::string& file, const std::string& body);
  /// Two stacked panels: primal curves on top, dual curves below.
  void svg(const std::string& file, const std::string& title,
           const std::vector<PlotSeries>& primal, const std::vector<PlotSeries>& dual);
  void summary(const std::string& file = "summary.txt");

  const std::filesystem::path& dir() const { return dir_; }

 private:
  void write(const std::string& file, const std::string& body);

  std::filesystem::path dir_;
  RunReport& report_;
};

}  // namespace rof1d::detail

#endif
