#include <cmath>

#include "hik/kernels.hpp"
#include "kernels_table.hpp"

namespace hik::kernels {

int orthonormal_sign(unsigned a, unsigned b) { return detail::sign_table().at(a & 0xF).at(b & 0xF); }

namespace scalar {

void orthonormal_mul(const double* a, const double* b, double* out) {
  const auto& table = detail::sign_table();
  double acc[16] = {};
  for (unsigned i = 0; i < 16; ++i) {
    for (unsigned j = 0; j < 16; ++j) acc[i ^ j] += table[i][j] * (a[i] * b[j]);
  }
  for (int k = 0; k < 16; ++k) out[k] = acc[k];
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  bool nan = false;
  for (double v : x) {
    const double a = std::fabs(v);
    if (std::isnan(a))
      nan = true;
    else if (a > m)
      m = a;
  }
  return nan ? std::nan("") : m;
}

}  // namespace scalar
}  // namespace hik::kernels
