#include <doctest.h>

#include <cmath>
#include <vector>

#include "rof1d/core.hpp"
#include "rof1d/random.hpp"

using namespace rof1d;

namespace {

StepFunction example(double k) { return StepFunction(2.0, {0.5, 1.0, 1.5}, {0.0, -k, k, 0.0}); }

}  // namespace

TEST_CASE("construction validates the partition") {
  CHECK_THROWS_AS(StepFunction(0.0, {}, {1.0}), Error);
  CHECK_THROWS_AS(StepFunction(1.0, {}, {}), Error);
  CHECK_THROWS_AS(StepFunction(1.0, {0.5}, {1.0}), Error);
  CHECK_THROWS_AS(StepFunction(1.0, {0.6, 0.4}, {1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(StepFunction(1.0, {1.0}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(StepFunction(1.0, {}, {NAN}), Error);
  try {
    StepFunction(1.0, {0.5}, {1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("canonical form merges equal neighbours") {
  const StepFunction u(3.0, {1.0, 2.0}, {1.0, 1.0, 2.0});
  CHECK(u.size() == 2);
  CHECK(u.breakpoints()[0] == 2.0);
  CHECK(u.value(0) == 1.0);

  // A run within the amplitude tolerance keeps its first value.
  const StepFunction v(3.0, {1.0, 2.0}, {1.0, 1.0 + 1e-13, 1.0 - 1e-13});
  CHECK(v.size() == 1);
  CHECK(v.value(0) == 1.0);
}

TEST_CASE("canonicalisation is idempotent") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const StepFunction u = random_step(rng);
    const StepFunction again(u.length(), {u.breakpoints().begin(), u.breakpoints().end()},
                             {u.values().begin(), u.values().end()});
    CHECK(again == u);
  }
}

TEST_CASE("evaluation and geometry") {
  const StepFunction u = example(4);
  CHECK(u(0.25) == 0.0);
  CHECK(u(0.5) == -4.0);  // right-hand value at a breakpoint
  CHECK(u(1.99) == 0.0);
  CHECK(u.left_edge(0) == 0.0);
  CHECK(u.right_edge(3) == 2.0);
  CHECK(u.width(1) == doctest::Approx(0.5));
  CHECK(u.min_value() == -4.0);
  CHECK(u.max_value() == 4.0);
}

TEST_CASE("total variation and traces") {
  CHECK(total_variation(example(4)) == 16.0);
  CHECK(total_variation(StepFunction::constant(1.0, 3.0)) == 0.0);
  const Traces t = traces(StepFunction(3.0, {1.0, 2.0}, {1.0, 3.0, 0.0}));
  CHECK(t.left == 1.0);
  CHECK(t.right == 0.0);
}

TEST_CASE("tilde extension and monotonicity") {
  const ExtendedProfile p = tilde_extend(example(4), {-1.0, 1.0});
  CHECK(p.values == std::vector<double>{-1, 0, -4, 4, 0, 1});
  CHECK(p.monotonicity == Monotonicity::non_monotone);

  const ExtendedProfile q = tilde_extend(StepFunction(2.0, {1.0}, {-1.0, 1.0}), {-1.0, 1.0});
  CHECK(q.monotonicity == Monotonicity::increasing);
  CHECK(tilde_extend(StepFunction::constant(1.0, 2.0), {2.0, 2.0}).monotonicity ==
        Monotonicity::constant);
  const std::vector<double> dec{3, 2, 2, 1};
  CHECK(classify_monotonicity(dec) == Monotonicity::decreasing);
  CHECK(std::string(to_string(Monotonicity::non_monotone)) == "non-monotone");
}

TEST_CASE("distances and integrals") {
  const StepFunction f = example(4);
  const StepFunction u(2.0, {1.0}, {-1.0, 1.0});
  CHECK(lp_distance(f, u, 1) == doctest::Approx(4.0));
  // (1 + 9 + 9 + 1) / 2 = 10.
  CHECK(lp_distance(f, u, 2) == doctest::Approx(std::sqrt(10.0)));
  CHECK(linf_distance(f, u) == 3.0);
  CHECK(l1_norm(f) == doctest::Approx(4.0));
  CHECK(mean(f) == doctest::Approx(0.0));
  CHECK(integral_to(f, 1.0) == doctest::Approx(-2.0));
  CHECK(integral_to(f, 0.75) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(lp_distance(f, u, 3), Error);
  CHECK_THROWS_AS(require_same_domain(f, StepFunction::constant(1.0, 0.0)), Error);
}

TEST_CASE("relaxed energy by hand") {
  const StepFunction f = example(4);
  const StepFunction u(2.0, {1.0}, {-1.0, 1.0});
  // TV 2, fidelity 0.25/2 * 10, boundary terms 0.
  CHECK(relaxed_energy(u, {f, 0.25, {-1.0, 1.0}}) == doctest::Approx(2.0 + 1.25));
  // Boundary penalties: |(-1) - 0| + |1 - 3|.
  CHECK(relaxed_energy(u, {f, 0.0, {0.0, 3.0}}) == doctest::Approx(2.0 + 1.0 + 2.0));
  CHECK_THROWS_AS(relaxed_energy(u, {f, -1.0, {0.0, 0.0}}), Error);
}

TEST_CASE("energy with lambda = 0 is TV plus boundary terms") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const StepFunction u = random_step(rng);
    const StepFunction f = random_step(rng);
    const BoundaryPair phi{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Traces t = traces(u);
    CHECK(relaxed_energy(u, {f, 0.0, phi}) ==
          doctest::Approx(total_variation(u) + std::abs(t.left - phi.a) + std::abs(t.right - phi.b)));
  }
}

TEST_CASE("energy does not depend on the partition used to evaluate it") {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const StepFunction u = random_step(rng);
    const StepFunction f = random_step(rng);
    const double lambda = rng.uniform(0.1, 10);
    const BoundaryPair phi{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const std::vector<double> extra{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    const auto coarse = overlay(u, f);
    const auto fine = overlay(u, f, extra);
    CHECK(fine.size() >= coarse.size());
    CHECK(relaxed_energy(fine, lambda, phi) == doctest::Approx(relaxed_energy(coarse, lambda, phi)));
    CHECK(relaxed_energy(coarse, lambda, phi) == doctest::Approx(relaxed_energy(u, {f, lambda, phi})));
  }
}

TEST_CASE("overlay covers the domain with matching values") {
  const StepFunction u(2.0, {1.0}, {1.0, 2.0});
  const StepFunction v(2.0, {0.5, 1.0}, {3.0, 4.0, 5.0});
  const auto cells = overlay(u, v, std::vector<double>{1.5, 7.0});
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].left == 0.0);
  CHECK(cells[3].right == 2.0);
  CHECK(cells[1].u == 1.0);
  CHECK(cells[1].v == 4.0);
  CHECK(cells[3].v == 5.0);
}

TEST_CASE("TV bounds the trace difference and satisfies the triangle inequality") {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const StepFunction u = random_step(rng);
    const StepFunction v = random_step(rng);
    const StepFunction w = random_step(rng);
    const Traces t = traces(u);
    CHECK(std::abs(t.right - t.left) <= total_variation(u) + 1e-12);
    for (int p : {1, 2}) {
      CHECK(lp_distance(u, w, p) <= lp_distance(u, v, p) + lp_distance(v, w, p) + 1e-12);
    }
  }
}

TEST_CASE("midpoint sampling") {
  const StepFunction u = StepFunction::sample_midpoint(1.0, 4, [](double x) { return x < 0.5 ? 1.0 : 2.0; });
  CHECK(u.size() == 2);
  CHECK(u.breakpoints()[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(StepFunction::sample_midpoint(1.0, 0, [](double) { return 0.0; }), Error);
}
