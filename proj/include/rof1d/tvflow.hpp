#ifndef ROF1D_TVFLOW_HPP
#define ROF1D_TVFLOW_HPP

#include <cstddef>
#include <vector>

#include "rof1d/core.hpp"

namespace rof1d {

/// Events closer in time than this are applied together.
inline constexpr double kEventTol = 1e-12;

enum class Curvature { zero, positive, negative };
const char* to_string(Curvature c);

struct Facet {
  double left;
  double right;
  double value;
  Curvature curvature;
  double speed;
};

std::vector<Facet> facet_decomposition(const StepFunction& u, const BoundaryPair& phi);

enum class EventKind { merge, boundary_hit, extinction };
enum class End { left, right };
const char* to_string(EventKind k);
const char* to_string(End e);

/// A single event candidate realised at the next event time.
struct EventSpec {
  EventKind kind;
  std::size_t facet;  // left facet of a merge, or the boundary facet
  End end;            // meaningful for boundary hits only
  double x;           // merge point or the touched endpoint
};

struct NextEvent {
  double t;
  std::vector<EventSpec> kinds;
};

/// Earliest merge or boundary hit for facets moving at constant `speeds`.
/// Throws ErrorCode::structural when no positive candidate exists.
NextEvent next_event(const StepFunction& u, const BoundaryPair& phi,
                     std::span<const double> speeds);

struct FlowEvent {
  double t;
  EventKind kind;
  std::size_t facet;
  End end;
  double x;
  StepFunction state_after;
};

/// Interval between two events: facet values move linearly at `speeds`.
struct Epoch {
  double t_start;
  StepFunction state;
  std::vector<double> speeds;
};

struct FlowTrajectory {
  StepFunction initial;
  BoundaryPair phi;
  std::vector<FlowEvent> events;
  std::vector<Epoch> epochs;
  double t_ext = 0.0;
  StepFunction terminal;

  /// State at time t >= 0 (the terminal state for t >= t_ext).
  StepFunction state_at(double t) const;
  /// Distinct epoch start times followed by t_ext.
  std::vector<double> breakpoint_times() const;
};

struct FlowOptions {
  /// Run with exact rational arithmetic; inputs are converted exactly.
  bool rational = false;
  /// Epoch cap; 0 selects 10 N + 16.
  std::size_t max_epochs = 0;
};

FlowTrajectory evolve(const StepFunction& u0, const BoundaryPair& phi,
                      const FlowOptions& opts = {});

struct BarrierBounds {
  double v0;       // upper constant barrier
  double w0;       // lower constant barrier
  double t_upper;  // time for the upper barrier to descend to max(phi)
  double t_lower;  // time for the lower barrier to rise to min(phi)
};

BarrierBounds barrier_bounds(const StepFunction& u0, const BoundaryPair& phi);

enum class ComparisonVerdict { holds, violated, not_applicable };
const char* to_string(ComparisonVerdict v);

struct ComparisonResult {
  ComparisonVerdict verdict;
  double worst_excess = 0.0;  // max of u - v over sampled space-time points
  double t_worst = 0.0;
  std::size_t samples = 0;
};

ComparisonResult check_comparison(const FlowTrajectory& u, const FlowTrajectory& v);

enum class TraceRelation { above, below, equal };
const char* to_string(TraceRelation r);

struct LayerRecord {
  TraceRelation relation;  // trace of the initial datum vs the boundary datum
  bool applicable = false;
  bool holds = false;
  double width = 0.0;  // largest delta with the ordering on the boundary layer
};

struct BoundaryLayerReport {
  LayerRecord left;
  LayerRecord right;
};

BoundaryLayerReport boundary_layer_report(const FlowTrajectory& traj);

}  // namespace rof1d

#endif  // ROF1D_TVFLOW_HPP
