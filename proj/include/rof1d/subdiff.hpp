#ifndef ROF1D_SUBDIFF_HPP
#define ROF1D_SUBDIFF_HPP

#include <optional>
#include <vector>

#include "rof1d/core.hpp"

namespace rof1d {

/// Absolute tolerance for every certificate comparison.
inline constexpr double kCertTol = 1e-9;

/// Continuous piecewise-affine field on [0, L], affine between nodes.
class DualField {
 public:
  DualField(std::vector<double> nodes, std::vector<double> values);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(double x) const;
  double sup_norm() const;
  double at_left() const { return values_.front(); }
  double at_right() const { return values_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
};

enum class Condition {
  sup_norm,        // |z| <= 1
  jump_alignment,  // z = sgn(jump) at every jump of u
  field_equation,  // z' = lambda (u - f)
  boundary_left,   // -z(0) in sgn(a - u(0+))
  boundary_right,  // z(L) in sgn(b - u(L-))
};

const char* to_string(Condition c);

struct Violation {
  Condition condition;
  double x;
  double magnitude;
};

struct Interval {
  double lo;
  double hi;

  bool empty() const noexcept { return lo > hi; }
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

struct CertificateReport {
  bool feasible = false;
  std::optional<Interval> feasible_z0_interval;
  std::optional<DualField> witness;
  std::vector<Violation> violations;
  /// Largest residual of the best available z0 (the witness when feasible).
  double worst_violation = 0.0;
  /// The z0 the residuals refer to.
  double z0 = 0.0;
};

/// Each optimality condition expressed as an admissible z(0)-set, exploiting
/// that z depends affinely on z(0). Equality pins are degenerate intervals.
struct DualConstraints {
  DualField primitive;  // lambda * int_0^x (u - f), i.e. z with z(0) = 0
  Interval sup_norm;
  double sup_arg_max;  // where the primitive peaks
  double sup_arg_min;
  struct Pin {
    Condition condition;
    double x;
    double z0;  // value of z(0) the pin forces
  };
  std::vector<Pin> pins;
};

DualConstraints dual_constraints(const StepFunction& u, const RofInstance& inst);

/// z(x) = z0 + lambda * int_0^x (u - f), nodes on the common grid of u and f.
DualField integrate_dual(const StepFunction& u, const RofInstance& inst, double z0);

CertificateReport verify_certificate(const StepFunction& u, const RofInstance& inst);

struct MinimalSection {
  DualField z;
  std::vector<double> speeds;  // z' on each interval of u
};

MinimalSection minimal_section(const StepFunction& u, const BoundaryPair& phi);

}  // namespace rof1d

#endif  // ROF1D_SUBDIFF_HPP
