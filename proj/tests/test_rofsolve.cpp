#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rof1d/random.hpp"
#include "rof1d/rofsolve.hpp"
#include "rof1d/tvflow.hpp"

using namespace rof1d;

namespace {

StepFunction example(double k) { return StepFunction(2.0, {0.5, 1.0, 1.5}, {0.0, -k, k, 0.0}); }
const BoundaryPair kPhi{-1.0, 1.0};
const StepFunction kTerminal(2.0, {1.0}, {-1.0, 1.0});

RandomStepSpec dyadic(int max_intervals) {
  RandomStepSpec s;
  s.max_intervals = max_intervals;
  s.dyadic_bits = 6;  // aligned with the oracle grid
  return s;
}

}  // namespace

TEST_CASE("piecewise quadratic basics") {
  PiecewiseQuadratic q = PiecewiseQuadratic::anchored(1.0, 2.0, 3.0);
  CHECK(q.value(1.0) == doctest::Approx(4.0));
  CHECK(q.value(3.0) == doctest::Approx(2.0));
  CHECK(q.derivative_left(1.0) == doctest::Approx(-5.0));
  CHECK(q.derivative_right(1.0) == doctest::Approx(-3.0));
  CHECK(q.knot_count() == 1);
  CHECK(q.is_convex());
  // Minimizer of |t - 1| + (t - 3)^2: t = 2.5.
  CHECK(q.level_point(0.0) == doctest::Approx(2.5));

  q.add_quadratic(2.0, 0.0);
  CHECK(q.value(0.0) == doctest::Approx(1.0 + 9.0));
  CHECK(q.is_convex());
}

TEST_CASE("infimal convolution with |.| clips the derivative") {
  PiecewiseQuadratic q = PiecewiseQuadratic::anchored(0.0, 2.0, 0.0);  // |t| + t^2
  const auto [lo, hi] = q.infimal_convolve_abs();
  CHECK(lo <= hi);
  for (double t : {-5.0, -1.0, 0.0, 0.3, 4.0}) {
    CHECK(q.derivative_right(t) <= 1.0 + 1e-12);
    CHECK(q.derivative_left(t) >= -1.0 - 1e-12);
  }
  // The subgradient at 0 is [-1, 1], so both clamp levels sit at 0 and the
  // result is |t|.
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(0.0));
  CHECK(q.value(0.0) == doctest::Approx(0.0));
  CHECK(q.value(3.0) == doctest::Approx(3.0));
  CHECK(q.is_convex());
}

TEST_CASE("solver examples") {
  const SolveReport r = solve_rof({example(4), 0.25, kPhi});
  CHECK(linf_distance(r.minimizer, kTerminal) <= 1e-12);
  CHECK(r.certificate.feasible);
  CHECK(r.certificate.z0 == doctest::Approx(0.75).epsilon(1e-12));

  const StepFunction c = StepFunction::constant(3.0, -2.0);
  const SolveReport rc = solve_rof({c, 7.0, {-2.0, -2.0}});
  CHECK(rc.minimizer == c);
  CHECK(rc.energy == doctest::Approx(0.0));

  const SolveReport r2 = solve_rof({StepFunction(2.0, {1.0}, {2.0, 0.0}), 1.0, {0.0, 0.0}});
  CHECK(r2.minimizer.size() == 1);
  CHECK(std::abs(r2.minimizer.value(0)) <= 1e-12);
  CHECK(r2.energy == doctest::Approx(2.0));
}

TEST_CASE("lambda must be positive") {
  for (double lambda : {0.0, -1.0}) {
    try {
      solve_rof({example(4), lambda, kPhi});
      FAIL("expected rejection");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_argument);
    }
  }
}

TEST_CASE("solver matches exhaustive sign-pattern search") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    RandomStepSpec spec;
    spec.max_intervals = 7;
    const StepFunction f = random_step(rng, spec);
    const RofInstance inst{f, rng.uniform(0.1, 10.0), {rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    const SolveReport r = solve_rof(inst);
    const StepFunction best = oracle::brute_force_minimizer(inst);
    CHECK(linf_distance(r.minimizer, best) <= 1e-9);
    CHECK(r.energy == doctest::Approx(relaxed_energy(best, inst)).epsilon(1e-12));
    CHECK(r.certificate.feasible);
    CHECK(r.certificate.worst_violation <= 1e-7);
  }
}

TEST_CASE("solver matches the iterative oracle") {
  Rng rng(42);
  const double lambdas[] = {0.1, 1.0, 10.0};
  for (int i = 0; i < 15; ++i) {
    const StepFunction f = random_step(rng, dyadic(6));
    const RofInstance inst{f, lambdas[i % 3], {rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    CHECK(linf_distance(solve_rof(inst).minimizer, solve_rof_oracle(inst)) <= 1e-6);
  }
  const StepFunction c = StepFunction::constant(2.0, 1.0);
  CHECK(linf_distance(solve_rof_oracle({c, 1.0, {1.0, 1.0}}), c) <= 1e-12);
  CHECK(linf_distance(solve_rof_oracle({example(4), 0.25, kPhi}), kTerminal) <= 1e-6);
}

TEST_CASE("oracle reports non-convergence") {
  OracleOptions o;
  o.max_iter = 3;
  o.tol = 1e-15;
  try {
    solve_rof_oracle({example(4), 0.25, kPhi}, o);
    FAIL("expected non-convergence");
  } catch (const NotConverged& e) {
    CHECK(e.code() == ErrorCode::not_converged);
    CHECK(e.gap() > 0.0);
  }
}

TEST_CASE("solutions are non-expansive in the data") {
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const StepFunction f1 = random_step(rng);
    const StepFunction f2 = random_step(rng);
    const double lambda = rng.uniform(0.1, 10);
    const BoundaryPair phi{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const auto u1 = solve_rof({f1, lambda, phi}).minimizer;
    const auto u2 = solve_rof({f2, lambda, phi}).minimizer;
    CHECK(lp_distance(u1, u2, 2) <= lp_distance(f1, f2, 2) + 1e-10);
  }
}

TEST_CASE("minimizers are stable in phi and lambda") {
  Rng rng(44);
  for (int i = 0; i < 20; ++i) {
    const StepFunction f = random_step(rng);
    const double lambda = rng.uniform(0.1, 10);
    const BoundaryPair phi{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const RofInstance base{f, lambda, phi};
    const double optimum = solve_rof(base).energy;
    const StepFunction u0 = solve_rof(base).minimizer;
    double excess = 0.0, dist = 0.0;
    for (double h : {1.0, 0.1, 0.01, 0.001}) {
      const auto u = solve_rof({f, lambda, {phi.a + h, phi.b - h}}).minimizer;
      excess = relaxed_energy(u, base) - optimum;
      CHECK(excess >= -1e-12);
      dist = lp_distance(solve_rof({f, lambda * (1 + h), phi}).minimizer, u0, 2);
    }
    CHECK(excess <= 0.01);
    CHECK(dist <= 0.01);
  }
}

TEST_CASE("prox flow") {
  const StepFunction mono(2.0, {1.0}, {-0.5, 0.5});
  for (const auto& u : prox_flow(mono, kPhi, 0.1, 5)) CHECK(u == mono);

  const auto big = prox_flow(example(4), kPhi, 4.0, 3);
  REQUIRE(big.size() >= 2);
  CHECK(linf_distance(big[1], kTerminal) <= 1e-8);

  const auto fine = prox_flow(example(4), kPhi, 1e-3, 2000);
  CHECK(linf_distance(fine.back(), evolve(example(4), kPhi).terminal) <= 1e-4);
}

TEST_CASE("energy decreases along prox flow") {
  Rng rng(45);
  for (int i = 0; i < 30; ++i) {
    const StepFunction f = random_step(rng);
    const BoundaryPair phi{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const auto seq = prox_flow(f, phi, rng.uniform(0.01, 1.0), 50);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      const RofInstance zero{seq[k], 0.0, phi};
      CHECK(relaxed_energy(seq[k], zero) <= relaxed_energy(seq[k - 1], zero) + 1e-12);
    }
  }
}
