#ifndef ROF1D_DETAIL_PINS_HPP
#define ROF1D_DETAIL_PINS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rof1d::detail {

/// Node values of the minimal-section field for a step function with values
/// `u` and boundary data (a, b). Node 0 is x = 0, node i (1 <= i < N) is the
/// i-th breakpoint and node N is x = L. Every value lies in {-1, 0, 1}.
///
/// Interior nodes carry the sign of the jump. An endpoint whose trace differs
/// from its datum is pinned to the sign the boundary inclusion demands; a
/// free endpoint copies the nearest pinned value (the clamp into [-1, 1] of
/// that value), or 0 when nothing is pinned.
template <class S>
std::vector<int> section_pins(std::span<const S> u, const S& a, const S& b,
                              const S& tol) {
  const std::size_t n = u.size();
  std::vector<int> z(n + 1, 0);
  auto sgn = [&](const S& d) { return d > tol ? 1 : (d < -tol ? -1 : 0); };

  for (std::size_t i = 1; i < n; ++i) z[i] = sgn(u[i] - u[i - 1]);

  const int left = sgn(u.front() - a);    // u(0+) > a  ->  z(0) = 1
  const int right = -sgn(u.back() - b);   // u(L-) > b  ->  z(L) = -1
  const bool left_free = left == 0;
  const bool right_free = right == 0;
  z[0] = left;
  z[n] = right;

  if (left_free) {
    if (n >= 2) {
      z[0] = z[1];
    } else if (!right_free) {
      z[0] = right;
    }
  }
  if (right_free) {
    if (n >= 2) {
      z[n] = z[n - 1];
    } else if (!left_free) {
      z[n] = left;
    }
  }
  return z;
}

}  // namespace rof1d::detail

#endif  // ROF1D_DETAIL_PINS_HPP
