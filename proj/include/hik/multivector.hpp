#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>

#include "hik/kernels.hpp"
#include "hik/scalar.hpp"

namespace hik {

inline constexpr int kDim = 4;
inline constexpr int kBlades = 16;

/// Basis blade dx^{i1}∧...∧dx^{ik} with i1 < ... < ik, stored as a bitmask
/// (bit i set ⇔ index i present). Canonical ordering is built in.
class Blade {
 public:
  constexpr Blade() = default;
  constexpr explicit Blade(std::uint8_t mask) : mask_(mask & 0xF) {}

  static constexpr Blade scalar() { return Blade(0); }
  static constexpr Blade generator(int i) { return Blade(static_cast<std::uint8_t>(1u << i)); }

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr int grade() const { return std::popcount(static_cast<unsigned>(mask_)); }
  constexpr bool contains(int i) const { return (mask_ >> i) & 1u; }
  /// Smallest index, or -1 for the scalar blade.
  constexpr int lowest() const { return mask_ ? std::countr_zero(static_cast<unsigned>(mask_)) : -1; }
  constexpr Blade without(int i) const { return Blade(static_cast<std::uint8_t>(mask_ & ~(1u << i))); }

  /// "1", "dx0", "dx0^dx2", ...
  std::string name() const;

  friend constexpr bool operator==(Blade, Blade) = default;

 private:
  std::uint8_t mask_ = 0;
};

/// Sign of the permutation sorting the concatenation (a, b) of two
/// canonical blades into ascending order. Repeated indices are not
/// treated specially; callers handle overlap.
constexpr int reorder_sign(std::uint8_t a, std::uint8_t b) {
  int swaps = 0;
  for (unsigned x = a >> 1; x; x >>= 1) swaps += std::popcount(x & b);
  return (swaps & 1) ? -1 : 1;
}

/// Element of the exterior algebra over T^4 in the wedge-blade basis of
/// coordinate differentials. Storage is dense; a zero coefficient is the
/// same as an absent blade. Coefficients are never pruned.
template <class T>
class Multivector {
 public:
  Multivector() { coeffs_.fill(T(0.0)); }

  static Multivector scalar(const T& s) {
    Multivector m;
    m.coeffs_[0] = s;
    return m;
  }
  static Multivector blade(Blade b, const T& c = T(1.0)) {
    Multivector m;
    m.coeffs_[b.mask()] = c;
    return m;
  }
  /// Grade-1 element from covector components w_μ dx^μ.
  template <class V>
  static Multivector vector(const V& components) {
    Multivector m;
    for (int i = 0; i < kDim; ++i) m.coeffs_[1u << i] = components[i];
    return m;
  }

  const T& operator[](Blade b) const { return coeffs_[b.mask()]; }
  T& operator[](Blade b) { return coeffs_[b.mask()]; }
  const T& at(int mask) const { return coeffs_[mask]; }
  T& at(int mask) { return coeffs_[mask]; }

  std::span<const T, kBlades> coefficients() const { return coeffs_; }
  std::span<T, kBlades> coefficients() { return coeffs_; }

  Multivector& operator+=(const Multivector& o) {
    for (int i = 0; i < kBlades; ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    for (int i = 0; i < kBlades; ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Multivector& operator*=(const T& s) {
    for (auto& c : coeffs_) c = c * s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, const T& s) { return a *= s; }
  friend Multivector operator*(const T& s, Multivector a) { return a *= s; }
  Multivector operator-() const {
    Multivector r;
    for (int i = 0; i < kBlades; ++i) r.coeffs_[i] = -coeffs_[i];
    return r;
  }

  friend bool operator==(const Multivector& a, const Multivector& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::array<T, kBlades> coeffs_;
};

using MultivectorD = Multivector<double>;

/// Exterior product. Bilinear and associative; blades sharing an index
/// give zero.
template <class T>
Multivector<T> wedge(const Multivector<T>& u, const Multivector<T>& v) {
  Multivector<T> r;
  for (int a = 0; a < kBlades; ++a) {
    if (is_zero(u.at(a))) continue;
    for (int b = 0; b < kBlades; ++b) {
      if (a & b) continue;
      const int s = reorder_sign(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
      const T term = u.at(a) * v.at(b);
      if (s > 0)
        r.at(a | b) += term;
      else
        r.at(a | b) -= term;
    }
  }
  return r;
}

/// Interior product ι_w with index-raised vector components w^μ:
/// ι_w(dx^μ) = w^μ, extended as a grade-lowering antiderivation.
template <class T, class V>
Multivector<T> interior(const V& w, const Multivector<T>& u) {
  Multivector<T> r;
  for (int a = 1; a < kBlades; ++a) {
    if (is_zero(u.at(a))) continue;
    int position = 0;
    for (int i = 0; i < kDim; ++i) {
      if (!((a >> i) & 1)) continue;
      const T term = u.at(a) * T(w[i]);
      if (position % 2 == 0)
        r.at(a & ~(1 << i)) += term;
      else
        r.at(a & ~(1 << i)) -= term;
      ++position;
    }
  }
  return r;
}

template <class T>
Multivector<T> grade_project(const Multivector<T>& u, int k) {
  Multivector<T> r;
  if (k < 0 || k > kDim) return r;
  for (int a = 0; a < kBlades; ++a)
    if (std::popcount(static_cast<unsigned>(a)) == k) r.at(a) = u.at(a);
  return r;
}

/// Everything outside grade k.
template <class T>
Multivector<T> grade_complement(const Multivector<T>& u, int k) {
  return u - grade_project(u, k);
}

/// Reversion: sign (−1)^{k(k−1)/2} on grade k.
template <class T>
Multivector<T> reverse(const Multivector<T>& u) {
  Multivector<T> r = u;
  for (int a = 0; a < kBlades; ++a) {
    const int k = std::popcount(static_cast<unsigned>(a));
    if ((k * (k - 1) / 2) % 2) r.at(a) = -r.at(a);
  }
  return r;
}

/// Largest coefficient magnitude; the residual norm of every verifier.
inline double max_abs_coeff(const MultivectorD& u) { return kernels::max_abs(u.coefficients()); }

inline Rational max_abs_coeff(const Multivector<Rational>& u) {
  Rational m = 0;
  for (const auto& c : u.coefficients()) {
    Rational a = abs(c);
    if (a > m) m = a;
  }
  return m;
}

inline bool approx_eq(const MultivectorD& u, const MultivectorD& v, double tol) {
  return max_abs_coeff(u - v) <= tol;
}

/// Leading parts of a dual-valued multivector.
template <class T>
Multivector<T> values(const Multivector<Dual<T>>& u) {
  Multivector<T> r;
  for (int a = 0; a < kBlades; ++a) r.at(a) = u.at(a).v;
  return r;
}

/// Derivative parts of a dual-valued multivector.
template <class T>
Multivector<T> derivatives(const Multivector<Dual<T>>& u) {
  Multivector<T> r;
  for (int a = 0; a < kBlades; ++a) r.at(a) = u.at(a).d;
  return r;
}

/// Collapse any realization to plain doubles (leading parts only).
template <class T>
MultivectorD to_double(const Multivector<T>& u) {
  MultivectorD r;
  for (int a = 0; a < kBlades; ++a) r.at(a) = value_of(u.at(a));
  return r;
}

}  // namespace hik
