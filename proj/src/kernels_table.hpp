#pragma once

#include <array>
#include <bit>

namespace hik::kernels::detail {

using SignTable = std::array<std::array<double, 16>, 16>;

// e_a e_b = sign · e_{a^b}: reordering sign times the Gram factor of every
// shared generator (e_0² = +1, e_i² = −1).
inline const SignTable& sign_table() {
  static const SignTable table = [] {
    SignTable t{};
    for (unsigned a = 0; a < 16; ++a) {
      for (unsigned b = 0; b < 16; ++b) {
        int swaps = 0;
        for (unsigned x = a >> 1; x; x >>= 1) swaps += std::popcount(x & b);
        double s = (swaps & 1) ? -1.0 : 1.0;
        const unsigned shared = a & b;
        if (std::popcount(shared & 0xEu) & 1) s = -s;
        t[a][b] = s;
      }
    }
    return t;
  }();
  return table;
}

}  // namespace hik::kernels::detail
