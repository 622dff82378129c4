#include <atomic>
#include <cstdlib>
#include <cstring>

#include "hik/kernels.hpp"

namespace hik::kernels {

namespace {

Isa initial_isa() {
  const char* force = std::getenv("HIK_FORCE_SCALAR");
  if (force && std::strcmp(force, "0") != 0 && *force) return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2::compiled() && __builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

void orthonormal_mul(const double* a, const double* b, double* out) {
  if (active_isa() == Isa::avx2)
    avx2::orthonormal_mul(a, b, out);
  else
    scalar::orthonormal_mul(a, b, out);
}

double max_abs(std::span<const double> x) {
  return active_isa() == Isa::avx2 ? avx2::max_abs(x) : scalar::max_abs(x);
}

}  // namespace hik::kernels
