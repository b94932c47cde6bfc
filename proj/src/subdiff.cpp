#include "rof1d/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rof1d/detail/pins.hpp"

namespace rof1d {

DualField::DualField(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size()) {
    throw Error(ErrorCode::invalid_argument,
                "dual field: need matching node/value lists of length >= 2");
  }
}

double DualField::operator()(double x) const {
  if (x <= nodes_.front()) return values_.front();
  if (x >= nodes_.back()) return values_.back();
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const auto j = static_cast<std::size_t>(it - nodes_.begin());
  const double t = (x - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

double DualField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::sup_norm: return "sup_norm";
    case Condition::jump_alignment: return "jump_alignment";
    case Condition::field_equation: return "field_equation";
    case Condition::boundary_left: return "boundary_left";
    case Condition::boundary_right: return "boundary_right";
  }
  return "?";
}

DualField integrate_dual(const StepFunction& u, const RofInstance& inst, double z0) {
  const auto cells = overlay(u, inst.f);
  std::vector<double> nodes{0.0};
  std::vector<double> vals{z0};
  double acc = 0.0;
  for (const auto& c : cells) {
    acc += inst.lambda * c.width() * (c.u - c.v);
    nodes.push_back(c.right);
    vals.push_back(z0 + acc);
  }
  return DualField(std::move(nodes), std::move(vals));
}

DualConstraints dual_constraints(const StepFunction& u, const RofInstance& inst) {
  DualField g = integrate_dual(u, inst, 0.0);
  const auto gv = g.values();
  const auto mx = std::max_element(gv.begin(), gv.end());
  const auto mn = std::min_element(gv.begin(), gv.end());

  DualConstraints dc{g,
                     {-1.0 - *mn, 1.0 - *mx},
                     g.nodes()[static_cast<std::size_t>(mx - gv.begin())],
                     g.nodes()[static_cast<std::size_t>(mn - gv.begin())],
                     {}};

  for (std::size_t i = 1; i < u.size(); ++i) {
    const double x = u.left_edge(i);
    const double s = u.value(i) > u.value(i - 1) ? 1.0 : -1.0;
    dc.pins.push_back({Condition::jump_alignment, x, s - g(x)});
  }

  const Traces tr = traces(u);
  if (std::abs(tr.left - inst.phi.a) > kAmpTol) {
    dc.pins.push_back({Condition::boundary_left, 0.0, tr.left > inst.phi.a ? 1.0 : -1.0});
  }
  if (std::abs(tr.right - inst.phi.b) > kAmpTol) {
    const double zl = tr.right > inst.phi.b ? -1.0 : 1.0;
    dc.pins.push_back({Condition::boundary_right, u.length(), zl - g.at_right()});
  }
  return dc;
}

namespace {

double distance_to(const Interval& iv, double v) {
  if (v < iv.lo) return iv.lo - v;
  if (v > iv.hi) return v - iv.hi;
  return 0.0;
}

// Residuals of every condition at a given z0, one entry per condition
// instance; the field equation is checked cell by cell on the witness.
std::vector<Violation> residuals(const DualConstraints& dc, double z0) {
  std::vector<Violation> out;
  const double d = distance_to(dc.sup_norm, z0);
  const double x = z0 > dc.sup_norm.hi ? dc.sup_arg_max : dc.sup_arg_min;
  out.push_back({Condition::sup_norm, x, d});
  for (const auto& p : dc.pins) out.push_back({p.condition, p.x, std::abs(z0 - p.z0)});
  return out;
}

}  // namespace

CertificateReport verify_certificate(const StepFunction& u, const RofInstance& inst) {
  if (inst.lambda < 0.0) {
    throw Error(ErrorCode::invalid_argument, "verify_certificate: lambda must be >= 0");
  }
  const DualConstraints dc = dual_constraints(u, inst);

  Interval feas{dc.sup_norm.lo - kCertTol, dc.sup_norm.hi + kCertTol};
  for (const auto& p : dc.pins) {
    feas.lo = std::max(feas.lo, p.z0 - kCertTol);
    feas.hi = std::min(feas.hi, p.z0 + kCertTol);
  }
  feas.lo = std::max(feas.lo, -1.0 - kCertTol);
  feas.hi = std::min(feas.hi, 1.0 + kCertTol);

  CertificateReport rep;
  rep.feasible = !feas.empty();

  double z0 = 0.0;
  if (rep.feasible) {
    z0 = feas.midpoint();
    rep.feasible_z0_interval = feas;
  } else {
    // Minimize the largest residual over z0. Each residual is the distance
    // to an interval, so the optimum sits on an endpoint or on the midpoint
    // of two endpoints.
    std::vector<double> ends{dc.sup_norm.lo, dc.sup_norm.hi};
    for (const auto& p : dc.pins) ends.push_back(p.z0);
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double c) {
      double worst = 0.0;
      for (const auto& v : residuals(dc, c)) worst = std::max(worst, v.magnitude);
      if (worst < best) {
        best = worst;
        z0 = c;
      }
    };
    for (std::size_t i = 0; i < ends.size(); ++i) {
      consider(ends[i]);
      for (std::size_t j = i + 1; j < ends.size(); ++j) consider(0.5 * (ends[i] + ends[j]));
    }
  }
  rep.z0 = z0;

  double worst = 0.0;
  for (const auto& v : residuals(dc, z0)) {
    worst = std::max(worst, v.magnitude);
    if (v.magnitude > kCertTol) rep.violations.push_back(v);
  }

  DualField z = integrate_dual(u, inst, z0);
  const auto cells = overlay(u, inst.f);
  const auto zv = z.values();
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double r = std::abs((zv[j + 1] - zv[j]) - inst.lambda * cells[j].width() *
                                                        (cells[j].u - cells[j].v));
    worst = std::max(worst, r);
    if (r > kCertTol) rep.violations.push_back({Condition::field_equation, cells[j].left, r});
  }
  rep.worst_violation = worst;
  if (!rep.violations.empty()) rep.feasible = false;
  if (rep.feasible) {
    rep.witness = std::move(z);
  } else {
    rep.feasible_z0_interval.reset();
  }
  return rep;
}

MinimalSection minimal_section(const StepFunction& u, const BoundaryPair& phi) {
  const auto pins = detail::section_pins<double>(u.values(), phi.a, phi.b, kAmpTol);
  std::vector<double> nodes{0.0};
  nodes.insert(nodes.end(), u.breakpoints().begin(), u.breakpoints().end());
  nodes.push_back(u.length());
  std::vector<double> vals(pins.begin(), pins.end());
  std::vector<double> speeds(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    speeds[i] = (vals[i + 1] - vals[i]) / u.width(i);
  }
  return {DualField(std::move(nodes), std::move(vals)), std::move(speeds)};
}

}  // namespace rof1d
