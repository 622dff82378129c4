#include <cmath>
#include <limits>

#include "hik/kernels.hpp"
#include "kernels_table.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define HIK_HAVE_AVX2 1
#endif

namespace hik::kernels::avx2 {

#ifdef HIK_HAVE_AVX2

bool compiled() { return true; }

namespace {

// Lane l of `v` moves to lane l ^ k.
__attribute__((target("avx2"))) inline __m256d xor_lanes(__m256d v, unsigned k) {
  switch (k & 3u) {
    case 1: return _mm256_permute4x64_pd(v, 0b10110001);
    case 2: return _mm256_permute4x64_pd(v, 0b01001110);
    case 3: return _mm256_permute4x64_pd(v, 0b00011011);
    default: return v;
  }
}

}  // namespace

// For fixed a and an aligned group b = 4g..4g+3 the targets a^b form the
// aligned group (a>>2)^g permuted by lane-xor with a&3. Accumulation order
// per target matches the scalar kernel, and no FMA is used, so results are
// bit-identical to scalar::orthonormal_mul.
__attribute__((target("avx2"))) void orthonormal_mul(const double* a, const double* b, double* out) {
  const auto& table = detail::sign_table();
  __m256d acc[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  const __m256d bv[4] = {_mm256_loadu_pd(b), _mm256_loadu_pd(b + 4), _mm256_loadu_pd(b + 8),
                         _mm256_loadu_pd(b + 12)};
  for (unsigned i = 0; i < 16; ++i) {
    const __m256d ai = _mm256_set1_pd(a[i]);
    for (unsigned g = 0; g < 4; ++g) {
      const __m256d s = _mm256_loadu_pd(table[i].data() + 4 * g);
      const __m256d term = _mm256_mul_pd(s, _mm256_mul_pd(ai, bv[g]));
      const unsigned target = (i >> 2) ^ g;
      acc[target] = _mm256_add_pd(acc[target], xor_lanes(term, i));
    }
  }
  for (unsigned g = 0; g < 4; ++g) _mm256_storeu_pd(out + 4 * g, acc[g]);
}

__attribute__((target("avx2"))) double max_abs(std::span<const double> x) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d v = _mm256_andnot_pd(sign, _mm256_loadu_pd(x.data() + i));
    nan = _mm256_or_pd(nan, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, v);
  }
  alignas(32) double lanes[4];
  alignas(32) double flags[4];
  _mm256_store_pd(lanes, m);
  _mm256_store_pd(flags, nan);
  bool any_nan = false;
  double result = 0.0;
  for (int l = 0; l < 4; ++l) {
    any_nan = any_nan || std::isnan(flags[l]) || flags[l] != 0.0;
    if (lanes[l] > result) result = lanes[l];
  }
  for (; i < x.size(); ++i) {
    const double a = std::fabs(x[i]);
    if (std::isnan(a))
      any_nan = true;
    else if (a > result)
      result = a;
  }
  return any_nan ? std::nan("") : result;
}

#else

bool compiled() { return false; }
void orthonormal_mul(const double* a, const double* b, double* out) { scalar::orthonormal_mul(a, b, out); }
double max_abs(std::span<const double> x) { return scalar::max_abs(x); }

#endif

}  // namespace hik::kernels::avx2
