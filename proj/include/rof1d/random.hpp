#ifndef ROF1D_RANDOM_HPP
#define ROF1D_RANDOM_HPP

#include <cstdint>
#include <random>

#include "rof1d/core.hpp"

namespace rof1d {

/// Seeded generator whose draws do not depend on the standard library's
/// distribution implementations, so suites replay identically everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

struct RandomStepSpec {
  int max_intervals = 6;
  double lo = -5.0;
  double hi = 5.0;
  double length = 2.0;
  /// When positive, breakpoints are multiples of length / 2^dyadic_bits.
  int dyadic_bits = 0;
};

StepFunction random_step(Rng& rng, const RandomStepSpec& spec = {});

}  // namespace rof1d

#endif  // ROF1D_RANDOM_HPP
