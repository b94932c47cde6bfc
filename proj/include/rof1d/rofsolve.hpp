#ifndef ROF1D_ROFSOLVE_HPP
#define ROF1D_ROFSOLVE_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "rof1d/core.hpp"
#include "rof1d/subdiff.hpp"

namespace rof1d {

/// Convex, continuous piecewise-quadratic function of one variable.
///
/// Piece k covers [start_k, start_{k+1}) (the first piece extends to -inf,
/// the last to +inf) and evaluates alpha t^2 + beta t + c. The derivative may
/// jump upward at a knot.
class PiecewiseQuadratic {
 public:
  struct Piece {
    double start;
    double alpha;
    double beta;
    double c;
  };

  /// |t - anchor| + weight/2 * (t - target)^2.
  static PiecewiseQuadratic anchored(double anchor, double weight, double target);

  std::span<const Piece> pieces() const noexcept { return pieces_; }
  std::size_t knot_count() const noexcept { return pieces_.size() - 1; }

  double value(double t) const;
  double derivative_left(double t) const;
  double derivative_right(double t) const;

  /// The unique t with level in [derivative_left(t), derivative_right(t)];
  /// requires strict convexity on every piece.
  double level_point(double level) const;

  /// Adds weight/2 * (t - target)^2.
  void add_quadratic(double weight, double target);

  /// Replaces V by t -> min_s V(s) + |t - s|; returns the clamp window
  /// [lo, hi] where V' crosses -1 and +1.
  std::pair<double, double> infimal_convolve_abs();

  bool is_convex(double tol = 1e-9) const;

 private:
  std::size_t piece_index(double t) const;
  void prune();

  std::vector<Piece> pieces_;
};

struct SolveStats {
  std::size_t cells = 0;
  std::size_t max_knots = 0;
  std::size_t total_knots = 0;
  std::size_t refinements = 0;
};

struct SolveReport {
  StepFunction minimizer;
  double energy;
  CertificateReport certificate;
  SolveStats stats;
};

/// Exact minimizer of the relaxed functional for lambda > 0.
SolveReport solve_rof(const RofInstance& inst);

struct OracleOptions {
  std::size_t grid_n = 2048;
  std::size_t max_iter = 2'000'000;
  double tol = 1e-9;  // duality gap
};

/// Independent iterative solver: accelerated projected gradient on the dual
/// of the uniformly discretised problem. Throws ErrorCode::not_converged with
/// the final gap in the message when max_iter is reached.
StepFunction solve_rof_oracle(const RofInstance& inst, const OracleOptions& opts = {});

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double gap)
      : Error(ErrorCode::not_converged, what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// Implicit Euler steps u^{k+1} = argmin of the relaxed functional with data
/// u^k and lambda = 1/dt. Stops early once an iterate repeats within
/// kAmpTol. The returned list starts with f.
std::vector<StepFunction> prox_flow(const StepFunction& f, const BoundaryPair& phi,
                                    double dt, std::size_t n_steps);

}  // namespace rof1d

#endif  // ROF1D_ROFSOLVE_HPP
