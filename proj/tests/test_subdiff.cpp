#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rof1d/random.hpp"
#include "rof1d/subdiff.hpp"

using namespace rof1d;

namespace {

StepFunction example(double k) { return StepFunction(2.0, {0.5, 1.0, 1.5}, {0.0, -k, k, 0.0}); }
const StepFunction kTerminal(2.0, {1.0}, {-1.0, 1.0});

std::vector<double> nodes_of(const DualField& z) { return {z.values().begin(), z.values().end()}; }

}  // namespace

TEST_CASE("integrate_dual on hand-computed fields") {
  const StepFunction f(1.0, {0.5}, {1.0, -1.0});
  const DualField z = integrate_dual(StepFunction::constant(1.0, 0.0), {f, 1.0, {0, 0}}, 0.0);
  REQUIRE(z.nodes().size() == 3);
  CHECK(z.values()[0] == doctest::Approx(0.0));
  CHECK(z.values()[1] == doctest::Approx(-0.5));
  CHECK(z.values()[2] == doctest::Approx(0.0));
  CHECK(z(0.25) == doctest::Approx(-0.25));

  const DualField flat = integrate_dual(StepFunction::constant(1.0, 0.0), {f, 0.0, {0, 0}}, 0.3);
  for (double v : flat.values()) CHECK(v == doctest::Approx(0.3));

  const DualField w = integrate_dual(kTerminal, {example(4), 0.25, {-1, 1}}, 0.75);
  const std::vector<double> expect{0.75, 0.625, 1.0, 0.625, 0.75};
  REQUIRE(w.values().size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(w.nodes()[i] == doctest::Approx(0.5 * i));
    CHECK(w.values()[i] == doctest::Approx(expect[i]));
  }
  CHECK(w.sup_norm() == doctest::Approx(1.0));
}

TEST_CASE("certificate for the small-data example") {
  const StepFunction f(1.0, {0.5}, {1.0, -1.0});
  const CertificateReport r = verify_certificate(StepFunction::constant(1.0, 0.0), {f, 1.0, {0, 0}});
  CHECK(r.feasible);
  REQUIRE(r.feasible_z0_interval);
  CHECK(r.feasible_z0_interval->contains(0.0));
  CHECK(r.feasible_z0_interval->lo == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(r.feasible_z0_interval->hi == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.violations.empty());
  REQUIRE(r.witness);
  CHECK(r.witness->sup_norm() <= 1.0 + kCertTol);
}

TEST_CASE("certificate for constant data is z = 0") {
  const StepFunction c = StepFunction::constant(2.0, 1.5);
  const CertificateReport r = verify_certificate(c, {c, 3.0, {1.5, 1.5}});
  CHECK(r.feasible);
  REQUIRE(r.witness);
  for (double v : r.witness->values()) CHECK(std::abs(v) <= 1.0);
  CHECK(r.feasible_z0_interval->contains(0.0));
}

TEST_CASE("the jump pin forces z0 = 0.75 in the worked example") {
  const CertificateReport r = verify_certificate(kTerminal, {example(4), 0.25, {-1, 1}});
  CHECK(r.feasible);
  CHECK(r.z0 == doctest::Approx(0.75).epsilon(1e-12));
  REQUIRE(r.witness);
  CHECK(r.witness->at_left() == doctest::Approx(0.75).epsilon(1e-9));
  CHECK((*r.witness)(1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("infeasible candidates report violations") {
  // f itself is not the minimizer of the example at lambda = 0.25.
  const CertificateReport r = verify_certificate(example(4), {example(4), 0.25, {-1, 1}});
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.feasible_z0_interval);
  CHECK_FALSE(r.violations.empty());
  CHECK(r.worst_violation > kCertTol);

  // Above the threshold the terminal state stops being optimal.
  const CertificateReport s = verify_certificate(kTerminal, {example(4), 5.0, {-1, 1}});
  CHECK_FALSE(s.feasible);
  bool saw_sup = false;
  for (const auto& v : s.violations) saw_sup = saw_sup || v.condition == Condition::sup_norm;
  CHECK(saw_sup);
}

TEST_CASE("boundary inclusions pin the endpoint flux") {
  // u constant 0 with data (1, 1) and f = 0: z must be -1 at 0 and +1 at L,
  // impossible for a constant z, so infeasible.
  const StepFunction zero = StepFunction::constant(1.0, 0.0);
  const CertificateReport r = verify_certificate(zero, {zero, 1.0, {1.0, 1.0}});
  CHECK_FALSE(r.feasible);
  bool left = false, right = false;
  for (const auto& p : dual_constraints(zero, {zero, 1.0, {1.0, 1.0}}).pins) {
    left = left || p.condition == Condition::boundary_left;
    right = right || p.condition == Condition::boundary_right;
  }
  CHECK(left);
  CHECK(right);
}

TEST_CASE("minimal section examples") {
  const MinimalSection m = minimal_section(example(4), {-1, 1});
  CHECK(nodes_of(m.z) == std::vector<double>{1, -1, 1, -1, 1});
  CHECK(m.speeds == std::vector<double>{-4, 4, -4, 4});

  const MinimalSection inc = minimal_section(StepFunction(2.0, {1.0}, {0.0, 0.5}), {-1, 1});
  for (double v : inc.z.values()) CHECK(v == 1.0);
  for (double s : inc.speeds) CHECK(s == 0.0);

  const MinimalSection low = minimal_section(StepFunction::constant(4.0, -2.0), {0.0, 1.0});
  CHECK(low.z.at_left() == -1.0);
  CHECK(low.z.at_right() == 1.0);
  CHECK(low.speeds == std::vector<double>{0.5});
}

TEST_CASE("free endpoints copy the neighbouring pin") {
  // Left trace equals the datum: z(0) copies the jump pin +1.
  const MinimalSection m = minimal_section(StepFunction(2.0, {1.0}, {0.0, 1.0}), {0.0, 5.0});
  CHECK(m.z.at_left() == 1.0);
  CHECK(m.speeds[0] == 0.0);
  // Nothing pinned: z = 0.
  const MinimalSection c = minimal_section(StepFunction::constant(1.0, 2.0), {2.0, 2.0});
  CHECK(c.z.at_left() == 0.0);
  CHECK(c.z.at_right() == 0.0);
}

TEST_CASE("zero speeds exactly when the extended profile is monotone") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    RandomStepSpec spec;
    spec.lo = -2;
    spec.hi = 2;
    const StepFunction u = random_step(rng, spec);
    const BoundaryPair phi{static_cast<double>(rng.integer(-2, 2)), static_cast<double>(rng.integer(-2, 2))};
    const MinimalSection m = minimal_section(u, phi);
    bool all_zero = true;
    for (double s : m.speeds) all_zero = all_zero && s == 0.0;
    CHECK(all_zero == (tilde_extend(u, phi).monotonicity != Monotonicity::non_monotone));
  }
}

TEST_CASE("minimal section depends only on sign pattern and order relations") {
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    const StepFunction u = random_step(rng);
    const BoundaryPair phi{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double scale = rng.uniform(0.1, 10.0);
    const double shift = rng.uniform(-3, 3);
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x = scale * x + shift;
    const StepFunction w(u.length(), {u.breakpoints().begin(), u.breakpoints().end()}, v);
    const BoundaryPair psi{scale * phi.a + shift, scale * phi.b + shift};
    CHECK(nodes_of(minimal_section(u, phi).z) == nodes_of(minimal_section(w, psi).z));
  }
}

TEST_CASE("certificate feasibility matches brute-force minimality") {
  Rng rng(23);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int i = 0; i < 150; ++i) {
    RandomStepSpec spec;
    spec.max_intervals = 5;
    const StepFunction f = random_step(rng, spec);
    const RofInstance inst{f, rng.uniform(0.1, 10), {rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    const StepFunction best = oracle::brute_force_minimizer(inst);
    const CertificateReport r = verify_certificate(best, inst);
    CHECK(r.feasible);
    CHECK(r.worst_violation <= 1e-9);
    feasible_seen += r.feasible;

    // A perturbation of the minimizer must fail.
    std::vector<double> v(best.values().begin(), best.values().end());
    v[rng.integer(0, static_cast<int>(v.size()) - 1)] += rng.uniform(0.01, 1.0);
    const StepFunction worse(best.length(), {best.breakpoints().begin(), best.breakpoints().end()}, v);
    const bool worse_feasible = verify_certificate(worse, inst).feasible;
    CHECK_FALSE(worse_feasible);
    infeasible_seen += !worse_feasible;
  }
  CHECK(feasible_seen == 150);
  CHECK(infeasible_seen == 150);
}

TEST_CASE("condition names") {
  CHECK(std::string(to_string(Condition::jump_alignment)) == "jump_alignment");
}
