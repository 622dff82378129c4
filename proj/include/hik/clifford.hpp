#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "hik/linalg.hpp"
#include "hik/multivector.hpp"

namespace hik {

class ContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric data at a point: g_{μν} and the generator Gram matrix g^{μν}
/// (dx^μ∨dx^ν + dx^ν∨dx^μ = 2g^{μν}).
template <class T>
class CliffordContext {
 public:
  CliffordContext(Mat4<T> metric, Mat4<T> inverse_metric)
      : g_(std::move(metric)), ginv_(std::move(inverse_metric)) {}

  static CliffordContext from_metric(const Mat4<T>& metric) { return {metric, inverse(metric)}; }

  static CliffordContext minkowski() {
    Mat4<T> eta = zero_mat<T>();
    eta[0][0] = T(1.0);
    for (int i = 1; i < 4; ++i) eta[i][i] = T(-1.0);
    return {eta, eta};
  }

  const Mat4<T>& metric() const { return g_; }
  const Mat4<T>& inverse_metric() const { return ginv_; }

 private:
  Mat4<T> g_;
  Mat4<T> ginv_;
};

/// Throws ContextError unless g·g⁻¹ = 1 (within 1e-12 for floats, exactly
/// for rationals) and g has signature (1,3).
template <class T>
void validate(const CliffordContext<T>& ctx) {
  const Mat4<T> prod = matmul(ctx.metric(), ctx.inverse_metric());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const T expected = T(i == j ? 1.0 : 0.0);
      if constexpr (std::is_same_v<T, Rational>) {
        if (prod[i][j] != expected) throw ContextError("g·g⁻¹ is not the identity");
      } else {
        if (std::fabs(value_of(prod[i][j] - expected)) > 1e-12)
          throw ContextError("g·g⁻¹ deviates from the identity by more than 1e-12");
      }
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j)
      if (value_of(ctx.metric()[i][j]) != value_of(ctx.metric()[j][i])) throw ContextError("metric is not symmetric");
  const Inertia in = inertia(to_double(ctx.metric()));
  if (in.positive != 1 || in.negative != 3)
    throw ContextError("signature error: expected (1,3), found (" + std::to_string(in.positive) + "," +
                       std::to_string(in.negative) + ") with " + std::to_string(in.zero) + " null directions");
}

/// dx^i ∨ v = dx^i ∧ v + ι_{g^{i·}} v
template <class T>
Multivector<T> generator_mul(const CliffordContext<T>& ctx, int i, const Multivector<T>& v) {
  const auto& raised = ctx.inverse_metric()[i];
  Multivector<T> r;
  const int bit = 1 << i;
  for (int b = 0; b < kBlades; ++b) {
    if (is_zero(v.at(b))) continue;
    if (!(b & bit)) {
      if (reorder_sign(static_cast<std::uint8_t>(bit), static_cast<std::uint8_t>(b)) > 0)
        r.at(b | bit) += v.at(b);
      else
        r.at(b | bit) -= v.at(b);
    }
    int position = 0;
    for (int j = 0; j < kDim; ++j) {
      if (!((b >> j) & 1)) continue;
      const T term = v.at(b) * raised[j];
      if (position % 2 == 0)
        r.at(b & ~(1 << j)) += term;
      else
        r.at(b & ~(1 << j)) -= term;
      ++position;
    }
  }
  return r;
}

/// Clifford product u∨v. For a blade A = dx^i ∧ A′ (i the lowest index)
/// A∨v = dx^i∨(A′∨v) − (ι_{g^{i·}}A′)∨v, evaluated bottom-up over the
/// blades of u.
template <class T>
Multivector<T> clifford_mul(const CliffordContext<T>& ctx, const Multivector<T>& u, const Multivector<T>& v) {
  std::array<bool, kBlades> needed{};
  for (int a = 0; a < kBlades; ++a) needed[a] = !is_zero(u.at(a));
  for (int a = kBlades - 1; a > 0; --a) {
    if (!needed[a]) continue;
    const Blade blade(static_cast<std::uint8_t>(a));
    const Blade rest = blade.without(blade.lowest());
    needed[rest.mask()] = true;
    for (int j = 0; j < kDim; ++j)
      if (rest.contains(j)) needed[rest.without(j).mask()] = true;
  }

  std::array<Multivector<T>, kBlades> left;  // left[A] = e_A ∨ v
  left[0] = v;
  for (int a = 1; a < kBlades; ++a) {
    if (!needed[a]) continue;
    const Blade blade(static_cast<std::uint8_t>(a));
    const int i = blade.lowest();
    const Blade rest = blade.without(i);
    left[a] = generator_mul(ctx, i, left[rest.mask()]);
    int position = 0;
    for (int j = 0; j < kDim; ++j) {
      if (!rest.contains(j)) continue;
      const T& gij = ctx.inverse_metric()[i][j];
      if (!is_zero(gij)) {
        const Multivector<T>& lower = left[rest.without(j).mask()];
        if (position % 2 == 0)
          left[a] -= lower * gij;
        else
          left[a] += lower * gij;
      }
      ++position;
    }
  }

  Multivector<T> r;
  for (int a = 0; a < kBlades; ++a)
    if (!is_zero(u.at(a))) r += left[a] * u.at(a);
  return r;
}

/// Left-associated product of several factors.
template <class T, class... Rest>
Multivector<T> clifford_mul(const CliffordContext<T>& ctx, const Multivector<T>& u, const Multivector<T>& v,
                            const Rest&... rest) {
  return clifford_mul(ctx, clifford_mul(ctx, u, v), rest...);
}

template <class T>
Multivector<T> commutator(const CliffordContext<T>& ctx, const Multivector<T>& u, const Multivector<T>& v) {
  return clifford_mul(ctx, u, v) - clifford_mul(ctx, v, u);
}

template <class T>
Multivector<T> anticommutator(const CliffordContext<T>& ctx, const Multivector<T>& u, const Multivector<T>& v) {
  return clifford_mul(ctx, u, v) + clifford_mul(ctx, v, u);
}

}  // namespace hik
