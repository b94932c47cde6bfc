#ifndef ROF1D_ATTAIN_HPP
#define ROF1D_ATTAIN_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rof1d/core.hpp"
#include "rof1d/rofsolve.hpp"

namespace rof1d {

/// How a candidate meets the boundary datum at one endpoint.
///  - trace: the one-sided limit equals the datum.
///  - viscosity_only: it does not, but the flux is pinned at the sign the
///    boundary inclusion requires.
///  - violated: neither (only possible for non-minimizers).
enum class EndpointMode { trace, viscosity_only, violated };
const char* to_string(EndpointMode m);

struct EndpointAttainment {
  EndpointMode mode;
  double z;      // flux value used for the decision
  double trace;  // one-sided limit of u
  double datum;  // boundary datum
};

struct AttainmentReport {
  EndpointAttainment left;
  EndpointAttainment right;
  bool certificate_feasible = false;

  bool both_trace() const {
    return left.mode == EndpointMode::trace && right.mode == EndpointMode::trace;
  }
};

AttainmentReport classify_attainment(const StepFunction& u, const RofInstance& inst);

struct TheoremVerdict {
  std::string theorem;
  bool hypotheses = false;
  bool conclusion = false;
  std::vector<std::pair<std::string, double>> diagnostics;

  bool passed() const { return !hypotheses || conclusion; }
  std::optional<double> diagnostic(const std::string& key) const;
};

/// phi := traces of f; the minimizer must then attain phi at both ends.
TheoremVerdict check_trace_inheritance(const StepFunction& f, double lambda);

/// With phi := (mean f, mean f) and lambda * ||f||_1 <= 1 the minimizer is the
/// constant mean, certified by the clamp construction of z(0).
TheoremVerdict check_small_data(const StepFunction& f, double lambda);

/// z(0) chosen by the clamp rule for the constant candidate mean(f).
double small_data_clamp_z0(const StepFunction& f, double lambda);

/// 2 / ||f - u_T||_1 with u_T the terminal state of the flow started at f;
/// +inf when f is already terminal.
double lambda_threshold(const StepFunction& f, const BoundaryPair& phi);

/// Below the threshold the terminal state must be the minimizer; when each
/// trace of f lies beyond the datum at its own end the terminal state must also
/// attain phi.
TheoremVerdict check_terminal_minimizer(const StepFunction& f, const BoundaryPair& phi,
                                        double lambda);

struct LargeGapResult {
  BoundaryPair phi;
  TheoremVerdict verdict;
  SolveReport solution;      // minimizer for phi
  StepFunction base_minimizer;  // minimizer for phi = (0, 0)
  /// "increasing", "decreasing" or "none": which orientation of phi keeps
  /// the certificate of base_minimizer valid.
  std::string orientation;
};

LargeGapResult construct_large_gap(const StepFunction& f, double lambda);

struct InstabilityCase {
  double eps;
  StepFunction f;
  BoundaryPair phi;
  StepFunction minimizer;
  AttainmentReport attainment;
  double distance_to_limit;  // L2 distance of minimizers to the eps = 0 one
};

struct InstabilityFamily {
  std::string name;
  std::vector<InstabilityCase> cases;  // requested eps values, then eps = 0
  TheoremVerdict verdict;
};

struct InstabilityResult {
  InstabilityFamily data_family;      // perturbed f, fixed phi
  InstabilityFamily boundary_family;  // fixed f, perturbed phi
};

/// Data perturbation: f_eps = phi(0) on (0, eps), f0 elsewhere, where f0 is
/// strictly decreasing, phi(0) > f0(0+) and phi(L) = f0(L-). Boundary
/// perturbation: phi_eps = (f0(0+) + eps, f0(L-)).
InstabilityResult construct_instability_families(const std::vector<double>& eps,
                                                 const StepFunction& f0, const BoundaryPair& phi,
                                                 double lambda);

/// Defaults: f0 = (1 on (0,1), 0 on (1,2)), phi = (2, 0), lambda = 1.
InstabilityResult construct_instability_families(const std::vector<double>& eps);

}  // namespace rof1d

#endif  // ROF1D_ATTAIN_HPP
