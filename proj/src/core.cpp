#include "rof1d/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rof1d {

namespace {

// Breakpoints closer than this (relative to L) are treated as the same point
// when overlaying partitions.
constexpr double kPointTol = 1e-14;

void invalid(const std::string& msg) {
  throw Error(ErrorCode::invalid_argument, msg);
}

}  // namespace

StepFunction::StepFunction(double length, std::vector<double> breakpoints,
                           std::vector<double> values)
    : length_(length) {
  if (!(std::isfinite(length) && length > 0.0)) {
    invalid("step function: domain length must be finite and positive");
  }
  if (values.empty()) invalid("step function: at least one value required");
  if (breakpoints.size() + 1 != values.size()) {
    std::ostringstream os;
    os << "step function: " << breakpoints.size() << " breakpoints need "
       << breakpoints.size() + 1 << " values, got " << values.size();
    invalid(os.str());
  }
  for (double v : values) {
    if (!std::isfinite(v)) invalid("step function: values must be finite");
  }
  double prev = 0.0;
  for (double x : breakpoints) {
    if (!std::isfinite(x) || x <= prev || x >= length) {
      invalid("step function: breakpoints must be strictly increasing in (0, L)");
    }
    prev = x;
  }

  // Canonical form: a run of values within kAmpTol of its first entry is one
  // interval carrying that first value.
  values_.reserve(values.size());
  breakpoints_.reserve(breakpoints.size());
  values_.push_back(values[0]);
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::abs(values[i] - values_.back()) <= kAmpTol) continue;
    breakpoints_.push_back(breakpoints[i - 1]);
    values_.push_back(values[i]);
  }
}

StepFunction StepFunction::constant(double length, double value) {
  return StepFunction(length, {}, {value});
}

StepFunction StepFunction::sample_midpoint(
    double length, std::size_t cells, const std::function<double(double)>& fn) {
  if (cells == 0) invalid("sample_midpoint: need at least one cell");
  const double h = length / static_cast<double>(cells);
  std::vector<double> bps;
  std::vector<double> vals;
  bps.reserve(cells - 1);
  vals.reserve(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    if (j > 0) bps.push_back(h * static_cast<double>(j));
    vals.push_back(fn(h * (static_cast<double>(j) + 0.5)));
  }
  return StepFunction(length, std::move(bps), std::move(vals));
}

double StepFunction::left_edge(std::size_t i) const {
  if (i >= values_.size()) throw std::out_of_range("StepFunction::left_edge");
  return i == 0 ? 0.0 : breakpoints_[i - 1];
}

double StepFunction::right_edge(std::size_t i) const {
  if (i >= values_.size()) throw std::out_of_range("StepFunction::right_edge");
  return i + 1 == values_.size() ? length_ : breakpoints_[i];
}

double StepFunction::operator()(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double StepFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double StepFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::constant: return "constant";
    case Monotonicity::non_monotone: return "non-monotone";
  }
  return "?";
}

void require_same_domain(const StepFunction& u, const StepFunction& v) {
  const double scale = std::max(1.0, std::max(u.length(), v.length()));
  if (std::abs(u.length() - v.length()) > kPointTol * scale) {
    invalid("step functions live on different domains");
  }
}

std::vector<OverlayCell> overlay(const StepFunction& u, const StepFunction& v,
                                 std::span<const double> extra_points) {
  require_same_domain(u, v);
  const double L = u.length();
  std::vector<double> pts;
  pts.reserve(u.breakpoints().size() + v.breakpoints().size() +
              extra_points.size() + 2);
  pts.insert(pts.end(), u.breakpoints().begin(), u.breakpoints().end());
  pts.insert(pts.end(), v.breakpoints().begin(), v.breakpoints().end());
  for (double x : extra_points) {
    if (x > 0.0 && x < L) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());

  std::vector<double> edges{0.0};
  for (double x : pts) {
    if (x - edges.back() > kPointTol * L) edges.push_back(x);
  }
  if (L - edges.back() > kPointTol * L) {
    edges.push_back(L);
  } else {
    edges.back() = L;
  }

  std::vector<OverlayCell> cells;
  cells.reserve(edges.size() - 1);
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double mid = 0.5 * (edges[j] + edges[j + 1]);
    cells.push_back({edges[j], edges[j + 1], u(mid), v(mid)});
  }
  return cells;
}

double total_variation(const StepFunction& u) {
  double tv = 0.0;
  auto vals = u.values();
  for (std::size_t i = 1; i < vals.size(); ++i) tv += std::abs(vals[i] - vals[i - 1]);
  return tv;
}

Traces traces(const StepFunction& u) {
  return {u.values().front(), u.values().back()};
}

Monotonicity classify_monotonicity(std::span<const double> seq) {
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const double d = seq[i] - seq[i - 1];
    if (d > kAmpTol) up = true;
    if (d < -kAmpTol) down = true;
  }
  if (up && down) return Monotonicity::non_monotone;
  if (up) return Monotonicity::increasing;
  if (down) return Monotonicity::decreasing;
  return Monotonicity::constant;
}

ExtendedProfile tilde_extend(const StepFunction& u, const BoundaryPair& phi) {
  ExtendedProfile p;
  p.values.reserve(u.size() + 2);
  p.values.push_back(phi.a);
  p.values.insert(p.values.end(), u.values().begin(), u.values().end());
  p.values.push_back(phi.b);
  p.monotonicity = classify_monotonicity(p.values);
  return p;
}

double relaxed_energy(std::span<const OverlayCell> cells, double lambda,
                      const BoundaryPair& phi) {
  if (cells.empty()) invalid("relaxed_energy: empty cell list");
  double tv = 0.0;
  double fid = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double d = cells[j].u - cells[j].v;
    fid += cells[j].width() * d * d;
    if (j > 0) tv += std::abs(cells[j].u - cells[j - 1].u);
  }
  return tv + 0.5 * lambda * fid + std::abs(cells.front().u - phi.a) +
         std::abs(cells.back().u - phi.b);
}

double relaxed_energy(const StepFunction& u, const RofInstance& inst) {
  if (inst.lambda < 0.0) invalid("relaxed_energy: lambda must be >= 0");
  const auto cells = overlay(u, inst.f);
  return relaxed_energy(cells, inst.lambda, inst.phi);
}

double lp_distance(const StepFunction& u, const StepFunction& v, int p) {
  if (p != 1 && p != 2) invalid("lp_distance: p must be 1 or 2");
  double acc = 0.0;
  for (const auto& c : overlay(u, v)) {
    const double d = std::abs(c.u - c.v);
    acc += c.width() * (p == 1 ? d : d * d);
  }
  return p == 1 ? acc : std::sqrt(acc);
}

double linf_distance(const StepFunction& u, const StepFunction& v) {
  double m = 0.0;
  for (const auto& c : overlay(u, v)) m = std::max(m, std::abs(c.u - c.v));
  return m;
}

double l1_norm(const StepFunction& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f.width(i) * std::abs(f.value(i));
  return acc;
}

double mean(const StepFunction& f) {
  return integral_to(f, f.length()) / f.length();
}

double integral_to(const StepFunction& f, double x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lo = f.left_edge(i);
    if (lo >= x) break;
    acc += (std::min(x, f.right_edge(i)) - lo) * f.value(i);
  }
  return acc;
}

}  // namespace rof1d
