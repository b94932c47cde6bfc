#include "rof1d/tvflow.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "rof1d/detail/pins.hpp"
#include "rof1d/subdiff.hpp"

namespace rof1d {

using Rational = boost::multiprecision::cpp_rational;

const char* to_string(Curvature c) {
  switch (c) {
    case Curvature::zero: return "zero";
    case Curvature::positive: return "positive";
    case Curvature::negative: return "negative";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::merge: return "merge";
    case EventKind::boundary_hit: return "boundary_hit";
    case EventKind::extinction: return "extinction";
  }
  return "?";
}

const char* to_string(End e) { return e == End::left ? "left" : "right"; }

const char* to_string(ComparisonVerdict v) {
  switch (v) {
    case ComparisonVerdict::holds: return "holds";
    case ComparisonVerdict::violated: return "violated";
    case ComparisonVerdict::not_applicable: return "not_applicable";
  }
  return "?";
}

const char* to_string(TraceRelation r) {
  switch (r) {
    case TraceRelation::above: return "above";
    case TraceRelation::below: return "below";
    case TraceRelation::equal: return "equal";
  }
  return "?";
}

std::vector<Facet> facet_decomposition(const StepFunction& u, const BoundaryPair& phi) {
  const MinimalSection ms = minimal_section(u, phi);
  std::vector<Facet> out;
  out.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double s = ms.speeds[i];
    const Curvature c = s > 0.0 ? Curvature::positive
                                : (s < 0.0 ? Curvature::negative : Curvature::zero);
    out.push_back({u.left_edge(i), u.right_edge(i), u.value(i), c, s});
  }
  return out;
}

namespace {

double to_double(double v) { return v; }
double to_double(const Rational& v) { return v.convert_to<double>(); }

template <class S>
S from_double(double v) {
  return S(v);
}

template <class S>
struct Candidates {
  std::optional<S> t;
  std::vector<EventSpec> kinds;
};

// Event candidates for facets with edges `edges` (0, x_1, ..., L), values
// `vals` and constant speeds. Candidates within `tol` of the earliest one are
// returned together.
template <class S>
Candidates<S> find_events(const std::vector<S>& edges, const std::vector<S>& vals,
                          const std::vector<S>& speeds, const S& a, const S& b,
                          const S& amp_tol, const S& time_tol) {
  struct Raw {
    S t;
    EventSpec spec;
  };
  std::vector<Raw> raw;
  const std::size_t n = vals.size();
  const S zero(0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const S rate = speeds[i] - speeds[i + 1];
    if (rate == zero) continue;
    const S tc = (vals[i + 1] - vals[i]) / rate;
    if (tc > zero) {
      raw.push_back({tc, {EventKind::merge, i, End::left, to_double(edges[i + 1])}});
    }
  }
  auto boundary = [&](std::size_t i, const S& datum, End end, const S& x) {
    const S gap = datum - vals[i];
    if (speeds[i] == zero || (gap <= amp_tol && gap >= -amp_tol)) return;
    const S tc = gap / speeds[i];
    if (tc > zero) raw.push_back({tc, {EventKind::boundary_hit, i, end, to_double(x)}});
  };
  boundary(0, a, End::left, edges.front());
  boundary(n - 1, b, End::right, edges.back());

  Candidates<S> out;
  if (raw.empty()) return out;
  S tmin = raw.front().t;
  for (const auto& r : raw) tmin = std::min(tmin, r.t);
  out.t = tmin;
  for (const auto& r : raw) {
    if (r.t - tmin <= time_tol) out.kinds.push_back(r.spec);
  }
  return out;
}

template <class S>
StepFunction to_step(const std::vector<S>& edges, const std::vector<S>& vals) {
  std::vector<double> bps;
  std::vector<double> v;
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) bps.push_back(to_double(edges[i]));
  for (const auto& x : vals) v.push_back(to_double(x));
  return StepFunction(to_double(edges.back()), std::move(bps), std::move(v));
}

template <class S>
FlowTrajectory run_flow(const StepFunction& u0, const BoundaryPair& phi,
                        const FlowOptions& opts, const S& amp_tol, const S& time_tol) {
  std::vector<S> edges{S(0)};
  for (double x : u0.breakpoints()) edges.push_back(from_double<S>(x));
  edges.push_back(from_double<S>(u0.length()));
  std::vector<S> vals;
  for (double v : u0.values()) vals.push_back(from_double<S>(v));
  const S a = from_double<S>(phi.a);
  const S b = from_double<S>(phi.b);
  const S zero(0);

  FlowTrajectory traj{u0, phi, {}, {}, 0.0, u0};
  const std::size_t cap = opts.max_epochs ? opts.max_epochs : 10 * u0.size() + 16;
  S t = zero;

  auto strict_pins = [&]() {
    const S dl = vals.front() - a;
    const S dr = vals.back() - b;
    return std::size_t(dl > amp_tol || dl < -amp_tol) +
           std::size_t(dr > amp_tol || dr < -amp_tol);
  };

  for (std::size_t epoch = 0;; ++epoch) {
    if (epoch >= cap) {
      std::ostringstream os;
      os << "evolve: epoch cap " << cap << " exceeded";
      throw Error(ErrorCode::structural, os.str());
    }
    const auto pins = detail::section_pins<S>(vals, a, b, amp_tol);
    std::vector<S> speeds(vals.size());
    bool moving = false;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      speeds[i] = S(pins[i + 1] - pins[i]) / (edges[i + 1] - edges[i]);
      moving = moving || speeds[i] != zero;
    }
    std::vector<double> dspeeds;
    for (const auto& s : speeds) dspeeds.push_back(to_double(s));
    const StepFunction state = to_step(edges, vals);
    traj.epochs.push_back({to_double(t), state, dspeeds});

    if (!moving) {
      traj.t_ext = to_double(t);
      traj.terminal = state;
      traj.events.push_back({traj.t_ext, EventKind::extinction, 0, End::left, 0.0, state});
      return traj;
    }

    const auto cand = find_events<S>(edges, vals, speeds, a, b, amp_tol, time_tol);
    if (!cand.t) {
      throw Error(ErrorCode::structural, "evolve: nonzero speeds but no future event");
    }
    const S dt = *cand.t;
    const std::size_t measure_before = vals.size() + strict_pins();

    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += speeds[i] * dt;
    t += dt;

    // Snap boundary hits, then fuse merged neighbours. A fused group takes the
    // snapped datum when it contains a boundary facet.
    std::vector<bool> snapped(vals.size(), false);
    std::vector<bool> fuse_right(vals.size(), false);
    for (const auto& k : cand.kinds) {
      if (k.kind == EventKind::boundary_hit) {
        vals[k.facet] = k.end == End::left ? a : b;
        snapped[k.facet] = true;
      } else {
        fuse_right[k.facet] = true;
      }
    }
    std::vector<S> new_edges{edges.front()};
    std::vector<S> new_vals;
    for (std::size_t i = 0; i < vals.size();) {
      std::size_t j = i;
      while (j + 1 < vals.size() && fuse_right[j]) ++j;
      std::optional<S> v;
      for (std::size_t k = i; k <= j; ++k) {
        if (snapped[k]) v = vals[k];
      }
      if (!v) {
        S num = zero;
        S den = zero;
        for (std::size_t k = i; k <= j; ++k) {
          const S w = edges[k + 1] - edges[k];
          num += w * vals[k];
          den += w;
        }
        v = num / den;
      }
      const bool joins_previous =
          !new_vals.empty() && S(*v - new_vals.back()) <= amp_tol &&
          S(new_vals.back() - *v) <= amp_tol;
      if (joins_previous) {
        new_edges.back() = edges[j + 1];
      } else {
        new_vals.push_back(*v);
        new_edges.push_back(edges[j + 1]);
      }
      i = j + 1;
    }
    edges = std::move(new_edges);
    vals = std::move(new_vals);

    const StepFunction after = to_step(edges, vals);
    for (const auto& k : cand.kinds) {
      traj.events.push_back({to_double(t), k.kind, k.facet, k.end, k.x, after});
    }

    const std::size_t measure_after = vals.size() + strict_pins();
    if (measure_after >= measure_before) {
      throw Error(ErrorCode::structural, "evolve: epoch made no structural progress");
    }
  }
}

}  // namespace

NextEvent next_event(const StepFunction& u, const BoundaryPair& phi,
                     std::span<const double> speeds) {
  if (speeds.size() != u.size()) {
    throw Error(ErrorCode::invalid_argument, "next_event: one speed per facet required");
  }
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), u.breakpoints().begin(), u.breakpoints().end());
  edges.push_back(u.length());
  std::vector<double> vals(u.values().begin(), u.values().end());
  std::vector<double> sp(speeds.begin(), speeds.end());
  const auto cand = find_events<double>(edges, vals, sp, phi.a, phi.b, kAmpTol, kEventTol);
  if (!cand.t) {
    throw Error(ErrorCode::structural, "next_event: no positive event candidate");
  }
  return {*cand.t, cand.kinds};
}

FlowTrajectory evolve(const StepFunction& u0, const BoundaryPair& phi,
                      const FlowOptions& opts) {
  if (!std::isfinite(phi.a) || !std::isfinite(phi.b)) {
    throw Error(ErrorCode::invalid_argument, "evolve: boundary data must be finite");
  }
  if (opts.rational) return run_flow<Rational>(u0, phi, opts, Rational(0), Rational(0));
  return run_flow<double>(u0, phi, opts, kAmpTol, kEventTol);
}

StepFunction FlowTrajectory::state_at(double t) const {
  if (t < 0.0) throw Error(ErrorCode::invalid_argument, "state_at: negative time");
  if (t >= t_ext) return terminal;
  auto it = std::upper_bound(epochs.begin(), epochs.end(), t,
                             [](double x, const Epoch& e) { return x < e.t_start; });
  const Epoch& ep = *(it - 1);
  const double dt = t - ep.t_start;
  std::vector<double> vals(ep.state.values().begin(), ep.state.values().end());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += ep.speeds[i] * dt;
  return StepFunction(ep.state.length(),
                      {ep.state.breakpoints().begin(), ep.state.breakpoints().end()},
                      std::move(vals));
}

std::vector<double> FlowTrajectory::breakpoint_times() const {
  std::vector<double> ts;
  for (const auto& e : epochs) {
    if (ts.empty() || e.t_start > ts.back()) ts.push_back(e.t_start);
  }
  if (ts.empty() || t_ext > ts.back()) ts.push_back(t_ext);
  return ts;
}

BarrierBounds barrier_bounds(const StepFunction& u0, const BoundaryPair& phi) {
  BarrierBounds bb{};
  bb.v0 = std::max(phi.max(), u0.max_value());
  bb.w0 = std::min(phi.min(), u0.min_value());
  // A constant state outside [min phi, max phi] moves at speed 2/L.
  const double half_len = 0.5 * u0.length();
  bb.t_upper = bb.v0 - phi.max() > kAmpTol ? (bb.v0 - phi.max()) * half_len : 0.0;
  bb.t_lower = phi.min() - bb.w0 > kAmpTol ? (phi.min() - bb.w0) * half_len : 0.0;
  return bb;
}

ComparisonResult check_comparison(const FlowTrajectory& u, const FlowTrajectory& v) {
  ComparisonResult res{ComparisonVerdict::not_applicable};
  const double scale = std::max(1.0, u.initial.length());
  if (std::abs(u.initial.length() - v.initial.length()) > 1e-14 * scale) return res;
  if (u.phi.a > v.phi.a + kAmpTol || u.phi.b > v.phi.b + kAmpTol) return res;
  for (const auto& c : overlay(u.initial, v.initial)) {
    if (c.u > c.v + kAmpTol) return res;
  }

  std::vector<double> times = u.breakpoint_times();
  const auto tv = v.breakpoint_times();
  times.insert(times.end(), tv.begin(), tv.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  res.verdict = ComparisonVerdict::holds;
  res.worst_excess = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    for (const auto& c : overlay(u.state_at(t), v.state_at(t))) {
      const double excess = c.u - c.v;
      ++res.samples;
      if (excess > res.worst_excess) {
        res.worst_excess = excess;
        res.t_worst = t;
      }
      if (excess > kAmpTol) res.verdict = ComparisonVerdict::violated;
    }
  }
  return res;
}

namespace {

LayerRecord layer_at(const std::vector<OverlayCell>& cells, double trace, double datum,
                     bool from_left, double length) {
  LayerRecord rec;
  if (trace > datum + kAmpTol) {
    rec.relation = TraceRelation::above;
  } else if (trace < datum - kAmpTol) {
    rec.relation = TraceRelation::below;
  } else {
    rec.relation = TraceRelation::equal;
    return rec;
  }
  rec.applicable = true;
  // cells carry (f, u_T); above requires f >= u_T, below f <= u_T.
  auto ok = [&](const OverlayCell& c) {
    return rec.relation == TraceRelation::above ? c.u >= c.v - kAmpTol
                                                : c.u <= c.v + kAmpTol;
  };
  if (from_left) {
    for (const auto& c : cells) {
      if (!ok(c)) break;
      rec.width = c.right;
    }
  } else {
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
      if (!ok(*it)) break;
      rec.width = length - it->left;
    }
  }
  rec.holds = rec.width > 0.0;
  return rec;
}

}  // namespace

BoundaryLayerReport boundary_layer_report(const FlowTrajectory& traj) {
  const auto cells = overlay(traj.initial, traj.terminal);
  const Traces tf = traces(traj.initial);
  const double L = traj.initial.length();
  return {layer_at(cells, tf.left, traj.phi.a, true, L),
          layer_at(cells, tf.right, traj.phi.b, false, L)};
}

}  // namespace rof1d
