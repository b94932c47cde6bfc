#ifndef ROF1D_CORE_HPP
#define ROF1D_CORE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rof1d {

/// Absolute tolerance for amplitude comparisons (canonicalization, traces vs
/// boundary data, pointwise orderings).
inline constexpr double kAmpTol = 1e-12;

enum class ErrorCode {
  invalid_argument = 1,
  not_converged,
  structural,
  solver_bug,
  parse,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Piecewise-constant function on (0, L).
///
/// Value `values()[i]` is held on the open interval between breakpoints
/// i-1 and i (with 0 and L as the outer ends). The constructor validates the
/// partition and merges neighbours whose values agree within kAmpTol, so
/// every StepFunction is in canonical form.
class StepFunction {
 public:
  StepFunction(double length, std::vector<double> breakpoints,
               std::vector<double> values);

  static StepFunction constant(double length, double value);

  /// Uniform grid of `cells` intervals, each holding fn(midpoint).
  static StepFunction sample_midpoint(double length, std::size_t cells,
                                      const std::function<double(double)>& fn);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t i) const { return values_.at(i); }

  double left_edge(std::size_t i) const;
  double right_edge(std::size_t i) const;
  double width(std::size_t i) const { return right_edge(i) - left_edge(i); }

  /// Value at x; at a breakpoint the right-hand value is returned.
  double operator()(double x) const;

  double min_value() const;
  double max_value() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  double length_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

struct BoundaryPair {
  double a = 0.0;  // datum at x = 0
  double b = 0.0;  // datum at x = L

  double min() const noexcept { return a < b ? a : b; }
  double max() const noexcept { return a < b ? b : a; }
};

struct RofInstance {
  StepFunction f;
  double lambda;
  BoundaryPair phi;
};

struct Traces {
  double left;
  double right;
};

enum class Monotonicity { increasing, decreasing, constant, non_monotone };

const char* to_string(Monotonicity m);

/// The sequence (a, u_1, ..., u_N, b) together with its monotonicity class.
struct ExtendedProfile {
  std::vector<double> values;
  Monotonicity monotonicity;
};

/// One cell of the common refinement of two step functions.
struct OverlayCell {
  double left;
  double right;
  double u;
  double v;

  double width() const noexcept { return right - left; }
};

/// Common refinement of the partitions of u and v, optionally split further
/// at `extra_points` (points outside (0, L) are ignored).
std::vector<OverlayCell> overlay(const StepFunction& u, const StepFunction& v,
                                 std::span<const double> extra_points = {});

double total_variation(const StepFunction& u);
Traces traces(const StepFunction& u);
ExtendedProfile tilde_extend(const StepFunction& u, const BoundaryPair& phi);
Monotonicity classify_monotonicity(std::span<const double> seq);

/// TV(u) + (lambda/2) * ||u - f||^2 + |u(0+) - a| + |u(L-) - b|.
double relaxed_energy(const StepFunction& u, const RofInstance& inst);

/// Same functional evaluated on an explicit cell list (u vs f).
double relaxed_energy(std::span<const OverlayCell> cells, double lambda,
                      const BoundaryPair& phi);

double lp_distance(const StepFunction& u, const StepFunction& v, int p);
double linf_distance(const StepFunction& u, const StepFunction& v);
double l1_norm(const StepFunction& f);
double mean(const StepFunction& f);

/// Integral of f over (0, x).
double integral_to(const StepFunction& f, double x);

void require_same_domain(const StepFunction& u, const StepFunction& v);

}  // namespace rof1d

#endif  // ROF1D_CORE_HPP
