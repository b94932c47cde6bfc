#include "rof1d/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rof1d {

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

StepFunction random_step(Rng& rng, const RandomStepSpec& spec) {
  const int n = rng.integer(1, std::max(1, spec.max_intervals));
  std::set<double> cuts;
  if (spec.dyadic_bits > 0) {
    const int slots = 1 << spec.dyadic_bits;
    const int want = std::min(n - 1, slots - 1);
    while (static_cast<int>(cuts.size()) < want) {
      cuts.insert(spec.length * rng.integer(1, slots - 1) / slots);
    }
  } else {
    while (static_cast<int>(cuts.size()) < n - 1) {
      const double x = rng.uniform(0.0, spec.length);
      if (x > 1e-3 * spec.length && x < spec.length * (1 - 1e-3)) cuts.insert(x);
    }
  }
  std::vector<double> bps(cuts.begin(), cuts.end());
  std::vector<double> vals(bps.size() + 1);
  for (double& v : vals) v = rng.uniform(spec.lo, spec.hi);
  return StepFunction(spec.length, std::move(bps), std::move(vals));
}

}  // namespace rof1d
