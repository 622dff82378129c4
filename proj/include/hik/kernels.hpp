#pragma once

// Data-parallel double-precision kernels with a scalar reference
// implementation and an AVX2 variant chosen at runtime.
//
// orthonormal_mul: Clifford product of two 16-coefficient multivectors in an
//   orthonormal co-frame with Gram diag(+1,-1,-1,-1), blade index = bitmask.
// max_abs: largest |x| over a contiguous range.

#include <array>
#include <cstdint>
#include <span>

namespace hik::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

/// Best ISA supported by the running CPU (and compiled in).
Isa detected_isa();

/// ISA currently used by the dispatching entry points. Defaults to
/// detected_isa() unless the environment sets HIK_FORCE_SCALAR=1.
Isa active_isa();

/// Pin dispatch to `isa`; requests for an unsupported ISA fall back to scalar.
/// Returns the ISA actually selected.
Isa set_active_isa(Isa isa);

/// ±1 or 0 coefficient of e_{a^b} in e_a e_b for the orthonormal (1,3) frame.
int orthonormal_sign(unsigned a, unsigned b);

void orthonormal_mul(const double* a, const double* b, double* out);
double max_abs(std::span<const double> x);

namespace scalar {
void orthonormal_mul(const double* a, const double* b, double* out);
double max_abs(std::span<const double> x);
}  // namespace scalar

namespace avx2 {
bool compiled();
void orthonormal_mul(const double* a, const double* b, double* out);
double max_abs(std::span<const double> x);
}  // namespace avx2

}  // namespace hik::kernels
