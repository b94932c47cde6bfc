#include "rof1d/rofsolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace rof1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Adjacent pieces whose coefficients agree this closely are fused.
constexpr double kPruneTol = 1e-14;

// Extended precision for the oracle: u is recovered by differencing dual
// variables and dividing by lambda * h, which magnifies rounding.
using Real = long double;

}  // namespace

PiecewiseQuadratic PiecewiseQuadratic::anchored(double anchor, double weight, double target) {
  PiecewiseQuadratic q;
  const double a2 = 0.5 * weight;
  const double c0 = 0.5 * weight * target * target;
  q.pieces_.push_back({-kInf, a2, -weight * target - 1.0, c0 + anchor});
  q.pieces_.push_back({anchor, a2, -weight * target + 1.0, c0 - anchor});
  return q;
}

std::size_t PiecewiseQuadratic::piece_index(double t) const {
  auto it = std::upper_bound(pieces_.begin() + 1, pieces_.end(), t,
                             [](double x, const Piece& p) { return x < p.start; });
  return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

double PiecewiseQuadratic::value(double t) const {
  const Piece& p = pieces_[piece_index(t)];
  return (p.alpha * t + p.beta) * t + p.c;
}

double PiecewiseQuadratic::derivative_right(double t) const {
  const Piece& p = pieces_[piece_index(t)];
  return 2.0 * p.alpha * t + p.beta;
}

double PiecewiseQuadratic::derivative_left(double t) const {
  std::size_t k = piece_index(t);
  if (k > 0 && pieces_[k].start == t) --k;
  const Piece& p = pieces_[k];
  return 2.0 * p.alpha * t + p.beta;
}

double PiecewiseQuadratic::level_point(double level) const {
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const Piece& p = pieces_[k];
    const double start = p.start;
    const double end = k + 1 < pieces_.size() ? pieces_[k + 1].start : kInf;
    if (k > 0 && 2.0 * p.alpha * start + p.beta >= level) return start;
    if (p.alpha > 0.0) {
      const double t = (level - p.beta) / (2.0 * p.alpha);
      if (t < end) return std::max(t, start);
    } else if (p.beta >= level && k > 0) {
      return start;
    }
  }
  throw Error(ErrorCode::solver_bug, "piecewise quadratic: level not attained");
}

void PiecewiseQuadratic::add_quadratic(double weight, double target) {
  for (auto& p : pieces_) {
    p.alpha += 0.5 * weight;
    p.beta -= weight * target;
    p.c += 0.5 * weight * target * target;
  }
}

std::pair<double, double> PiecewiseQuadratic::infimal_convolve_abs() {
  const double lo = level_point(-1.0);
  const double hi = level_point(1.0);
  const double vlo = value(lo);
  const double vhi = value(hi);

  std::vector<Piece> out;
  out.push_back({-kInf, 0.0, -1.0, vlo + lo});
  if (hi > lo) {
    const std::size_t k0 = piece_index(lo);
    for (std::size_t k = k0; k < pieces_.size() && pieces_[k].start < hi; ++k) {
      Piece p = pieces_[k];
      p.start = std::max(p.start, lo);
      out.push_back(p);
    }
  }
  out.push_back({hi, 0.0, 1.0, vhi - hi});
  pieces_ = std::move(out);
  prune();
  return {lo, hi};
}

void PiecewiseQuadratic::prune() {
  std::vector<Piece> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    if (!out.empty()) {
      Piece& q = out.back();
      if (p.start <= q.start) {
        q = p;  // zero-width predecessor
        continue;
      }
      if (std::abs(p.alpha - q.alpha) <= kPruneTol && std::abs(p.beta - q.beta) <= kPruneTol &&
          std::abs(p.c - q.c) <= kPruneTol) {
        continue;
      }
    }
    out.push_back(p);
  }
  if (out.size() >= 2 && out[0].start == out[1].start) out.erase(out.begin() + 1);
  out.front().start = -kInf;
  pieces_ = std::move(out);
}

bool PiecewiseQuadratic::is_convex(double tol) const {
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (pieces_[k].alpha < 0.0) return false;
    if (k == 0) continue;
    const double t = pieces_[k].start;
    const Piece& l = pieces_[k - 1];
    const Piece& r = pieces_[k];
    const double scale = 1.0 + std::abs(t);
    if (2.0 * r.alpha * t + r.beta < 2.0 * l.alpha * t + l.beta - tol * scale) return false;
    const double vl = (l.alpha * t + l.beta) * t + l.c;
    const double vr = (r.alpha * t + r.beta) * t + r.c;
    if (std::abs(vl - vr) > tol * (1.0 + std::abs(vl))) return false;
  }
  return true;
}

namespace {

struct CellProblem {
  std::vector<double> widths;
  std::vector<double> targets;
};

// Forward value-function recursion with clamp windows, then back
// substitution. Returns one value per cell.
std::vector<double> solve_cells(const CellProblem& cp, double lambda, const BoundaryPair& phi,
                                SolveStats& stats) {
  const std::size_t n = cp.widths.size();
  std::vector<std::pair<double, double>> windows(n);
  PiecewiseQuadratic v = PiecewiseQuadratic::anchored(phi.a, lambda * cp.widths[0], cp.targets[0]);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) v.add_quadratic(lambda * cp.widths[i], cp.targets[i]);
    stats.max_knots = std::max(stats.max_knots, v.knot_count());
    stats.total_knots += v.knot_count();
    if (i + 1 < n) {
      windows[i] = v.infimal_convolve_abs();
    } else {
      windows[i] = {v.level_point(-1.0), v.level_point(1.0)};
    }
  }
  std::vector<double> u(n);
  double next = phi.b;
  for (std::size_t k = n; k-- > 0;) {
    u[k] = std::clamp(next, windows[k].first, windows[k].second);
    next = u[k];
  }
  return u;
}

StepFunction assemble(double length, const CellProblem& cp, const std::vector<double>& u) {
  std::vector<double> bps;
  double x = 0.0;
  for (std::size_t i = 0; i + 1 < cp.widths.size(); ++i) {
    x += cp.widths[i];
    bps.push_back(x);
  }
  return StepFunction(length, std::move(bps), u);
}

CellProblem halve(const CellProblem& cp) {
  CellProblem out;
  for (std::size_t i = 0; i < cp.widths.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      out.widths.push_back(0.5 * cp.widths[i]);
      out.targets.push_back(cp.targets[i]);
    }
  }
  return out;
}

}  // namespace

SolveReport solve_rof(const RofInstance& inst) {
  if (!(inst.lambda > 0.0) || !std::isfinite(inst.lambda)) {
    throw Error(ErrorCode::invalid_argument,
                "solve_rof: lambda must be positive (use terminal states for lambda = 0)");
  }
  if (!std::isfinite(inst.phi.a) || !std::isfinite(inst.phi.b)) {
    throw Error(ErrorCode::invalid_argument, "solve_rof: boundary data must be finite");
  }
  const StepFunction& f = inst.f;
  CellProblem cp;
  for (std::size_t i = 0; i < f.size(); ++i) {
    cp.widths.push_back(f.width(i));
    cp.targets.push_back(f.value(i));
  }

  SolveStats stats;
  constexpr std::size_t kMaxRefinements = 2;
  for (;;) {
    stats.cells = cp.widths.size();
    const auto u = solve_cells(cp, inst.lambda, inst.phi, stats);
    StepFunction minimizer = assemble(f.length(), cp, u);
    CertificateReport cert = verify_certificate(minimizer, inst);
    if (cert.feasible) {
      const double energy = relaxed_energy(minimizer, inst);
      return {std::move(minimizer), energy, std::move(cert), stats};
    }
    if (stats.refinements == kMaxRefinements) {
      std::ostringstream os;
      os << "solve_rof: minimizer failed its optimality certificate (worst violation "
         << cert.worst_violation << ")";
      throw Error(ErrorCode::solver_bug, os.str());
    }
    cp = halve(cp);
    ++stats.refinements;
  }
}

namespace {

// Uniformly discretised dual problem on n cells. Edge e in [0, n] joins cell
// e-1 and cell e; the outer edges join the anchors a and b. The dual
// variable p lives on edges, and u(p) = fbar - (p_e - p_{e+1}) / (lambda h).
class DualGridProblem {
 public:
  DualGridProblem(const RofInstance& inst, std::size_t n)
      : n_(n),
        h_(inst.f.length() / static_cast<double>(n)),
        mu_(static_cast<Real>(inst.lambda) * static_cast<Real>(h_)),
        a_(inst.phi.a),
        b_(inst.phi.b),
        fbar_(n) {
    // Cell averages: the discrete problem is the restriction of the
    // continuous one to functions constant on the grid cells.
    double prev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = j + 1 == n ? inst.f.length() : h_ * static_cast<double>(j + 1);
      const double cur = integral_to(inst.f, x);
      fbar_[j] = static_cast<Real>(cur - prev) / static_cast<Real>(h_);
      prev = cur;
    }
  }

  std::size_t cells() const { return n_; }

  void primal(const std::vector<Real>& p, std::vector<Real>& u) const {
    for (std::size_t j = 0; j < n_; ++j) u[j] = fbar_[j] - (p[j] - p[j + 1]) / mu_;
  }

  Real edge_diff(const std::vector<Real>& u, std::size_t e) const {
    const Real left = e == 0 ? a_ : u[e - 1];
    const Real right = e == n_ ? b_ : u[e];
    return right - left;
  }

  // Primal minus dual collapses to sum_e (|g_e| - p_e g_e) with g the edge
  // differences of u(p); every term is nonnegative, so nothing cancels.
  double gap(const std::vector<Real>& p, const std::vector<Real>& u) const {
    Real acc = 0;
    for (std::size_t e = 0; e <= n_; ++e) {
      const Real g = edge_diff(u, e);
      acc += std::abs(g) - p[e] * g;
    }
    return static_cast<double>(acc);
  }

  // FISTA with gradient restart, starting from p. Returns the final gap.
  double ascend(std::vector<Real>& p, std::vector<Real>& u, double tol, std::size_t& budget) const {
    std::vector<Real> p_prev(p), y(p), uy(n_);
    primal(p, u);
    double g = gap(p, u);
    const Real tau = mu_ / 4;
    double theta = 1.0;
    for (std::size_t it = 1; g > tol && budget > 0; ++it, --budget) {
      primal(y, uy);
      p_prev.swap(p);
      for (std::size_t e = 0; e <= n_; ++e) {
        p[e] = std::clamp<Real>(y[e] + tau * edge_diff(uy, e), -1, 1);
      }
      Real restart = 0;
      for (std::size_t e = 0; e <= n_; ++e) restart += (y[e] - p[e]) * (p[e] - p_prev[e]);
      if (restart > 0) theta = 1.0;
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      const Real beta = (theta - 1.0) / theta_next;
      for (std::size_t e = 0; e <= n_; ++e) y[e] = p[e] + beta * (p[e] - p_prev[e]);
      theta = theta_next;
      if (it % 32 == 0 || budget == 1) {
        primal(p, u);
        g = gap(p, u);
      }
    }
    primal(p, u);
    return gap(p, u);
  }

  // Exact discrete minimizer for the jump set read off u: edges with
  // |g_e| > jump_tol are jumps with sign sgn(g_e), the rest glue cells
  // together. Group values solve their stationarity equations; the result is
  // returned only if a discrete dual certificate exists for it.
  std::optional<std::vector<Real>> polish(const std::vector<Real>& u, Real jump_tol) const {
    std::vector<int> s(n_ + 1);
    for (std::size_t e = 0; e <= n_; ++e) {
      const Real g = edge_diff(u, e);
      s[e] = g > jump_tol ? 1 : (g < -jump_tol ? -1 : 0);
    }
    std::vector<Real> v(n_);
    for (std::size_t i = 0; i < n_;) {
      std::size_t j = i;
      while (j + 1 < n_ && s[j + 1] == 0) ++j;
      Real value;
      if (s[i] == 0 && s[j + 1] == 0) {
        if (a_ != b_) return std::nullopt;
        value = a_;
      } else if (s[i] == 0) {
        value = a_;
      } else if (s[j + 1] == 0) {
        value = b_;
      } else {
        Real sum = 0;
        for (std::size_t c = i; c <= j; ++c) sum += fbar_[c];
        const Real count = static_cast<Real>(j - i + 1);
        value = sum / count - static_cast<Real>(s[i] - s[j + 1]) / (mu_ * count);
      }
      for (std::size_t c = i; c <= j; ++c) v[c] = value;
      i = j + 1;
    }
    // Jumps must keep their signs.
    for (std::size_t e = 0; e <= n_; ++e) {
      if (s[e] != 0 && edge_diff(v, e) * s[e] <= 0) return std::nullopt;
    }
    // Dual sweep p_{e+1} = p_e + mu (v_e - fbar_e) = p_0 + c_{e+1}; intersect
    // the admissible p_0 ranges.
    constexpr Real kSlack = 1e-9L;
    Real lo = -1 - kSlack, hi = 1 + kSlack, c = 0;
    for (std::size_t e = 0; e <= n_; ++e) {
      if (s[e] != 0) {
        lo = std::max(lo, s[e] - c - kSlack);
        hi = std::min(hi, s[e] - c + kSlack);
      } else {
        lo = std::max(lo, -1 - c - kSlack);
        hi = std::min(hi, 1 - c + kSlack);
      }
      if (e < n_) c += mu_ * (v[e] - fbar_[e]);
    }
    if (lo > hi) return std::nullopt;
    return v;
  }

 private:
  std::size_t n_;
  double h_;
  Real mu_;
  Real a_;
  Real b_;
  std::vector<Real> fbar_;
};

}  // namespace

StepFunction solve_rof_oracle(const RofInstance& inst, const OracleOptions& opts) {
  if (!(inst.lambda > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "solve_rof_oracle: lambda must be positive");
  }
  if (opts.grid_n == 0) throw Error(ErrorCode::invalid_argument, "solve_rof_oracle: empty grid");

  // Coarse-to-fine: each level starts from the linearly interpolated dual
  // of the previous one. The dual approximates a continuous field, so the
  // fine grid only has to remove high-frequency error.
  std::size_t n = opts.grid_n;
  while (n % 2 == 0 && n / 2 >= 32) n /= 2;

  std::size_t budget = opts.max_iter;
  std::vector<Real> p(n + 1, 0);
  std::vector<Real> u;
  double gap = 0.0;
  for (;;) {
    const DualGridProblem level(inst, n);
    u.assign(n, 0);
    gap = level.ascend(p, u, opts.tol, budget);
    if (n == opts.grid_n || gap > opts.tol) break;
    std::vector<Real> fine(2 * n + 1);
    for (std::size_t e = 0; e <= n; ++e) fine[2 * e] = p[e];
    for (std::size_t e = 0; e < n; ++e) fine[2 * e + 1] = 0.5L * (p[e] + p[e + 1]);
    p.swap(fine);
    n *= 2;
  }
  if (gap > opts.tol) {
    std::ostringstream os;
    os << "solve_rof_oracle: duality gap " << gap << " above " << opts.tol << " after "
       << opts.max_iter << " iterations";
    throw NotConverged(os.str(), gap);
  }

  // The gap bounds the error only in an averaged sense; finish by solving
  // exactly on the identified jump set when a certificate confirms it.
  const DualGridProblem finest(inst, n);
  for (Real jump_tol : {1e-4L, 1e-6L, 1e-8L}) {
    if (auto exact = finest.polish(u, jump_tol)) {
      u = std::move(*exact);
      break;
    }
  }

  const double h = inst.f.length() / static_cast<double>(n);
  std::vector<double> bps;
  for (std::size_t j = 1; j < n; ++j) bps.push_back(h * static_cast<double>(j));
  return StepFunction(inst.f.length(), std::move(bps), std::vector<double>(u.begin(), u.end()));
}

std::vector<StepFunction> prox_flow(const StepFunction& f, const BoundaryPair& phi, double dt,
                                    std::size_t n_steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::invalid_argument, "prox_flow: time step must be positive");
  }
  std::vector<StepFunction> seq{f};
  for (std::size_t k = 0; k < n_steps; ++k) {
    SolveReport rep = solve_rof({seq.back(), 1.0 / dt, phi});
    const bool stationary = linf_distance(rep.minimizer, seq.back()) <= kAmpTol;
    seq.push_back(std::move(rep.minimizer));
    if (stationary) break;
  }
  return seq;
}

}  // namespace rof1d
