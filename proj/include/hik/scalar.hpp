#pragma once

// Scalar realizations used throughout the engine:
//   double       plain floating point
//   Rational     exact arithmetic for constant-coefficient checks
//   Dual<T>      forward-mode dual number; Dual<Dual<double>> is the
//                second-order (hyper-dual) number carrying a value, two
//                directional first derivatives and their mixed second
//                derivative.

#include <array>
#include <cmath>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace hik {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative along the seeded direction

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x), d(0.0) {}  // NOLINT: implicit on purpose
  constexpr Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  constexpr Dual(const T& value) : v(value), d(0.0) {}  // NOLINT

  constexpr Dual operator-() const { return {-v, -d}; }
  constexpr Dual operator+() const { return *this; }

  constexpr Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) { return *this = *this * o; }
  constexpr Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    T q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
  }
  friend constexpr bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
};

using Dual2 = Dual<Dual<double>>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Leading (non-derivative) part as a double.
inline double value_of(double x) { return x; }
inline double value_of(const Rational& x) { return x.convert_to<double>(); }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

/// Exact-zero test over every part of the number.
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x == 0; }
template <class T>
bool is_zero(const Dual<T>& x) {
  return is_zero(x.v) && is_zero(x.d);
}

// Elementary functions. Each propagates f(v) + f'(v)·d.
template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.v), -sin(x.v) * x.d};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  using std::tan;
  T t = tan(x.v);
  return {t, (T(1.0) + t * t) * x.d};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return {e, e * x.d};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.v);
  return {s, x.d / (T(2.0) * s)};
}
template <class T>
Dual<T> sinh(const Dual<T>& x) {
  using std::cosh;
  using std::sinh;
  return {sinh(x.v), cosh(x.v) * x.d};
}
template <class T>
Dual<T> cosh(const Dual<T>& x) {
  using std::cosh;
  using std::sinh;
  return {cosh(x.v), sinh(x.v) * x.d};
}
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  T t = tanh(x.v);
  return {t, (T(1.0) - t * t) * x.d};
}

/// Integer power by repeated squaring; exact for every realization.
template <class T>
T ipow(T base, long n) {
  if (n < 0) return T(1.0) / ipow(base, -n);
  T result(1.0);
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

/// A coordinate point; the scalar type decides which derivatives ride along.
template <class T>
using Point = std::array<T, 4>;

/// Lift a point into Dual<T>, seeding unit derivative along coordinate `dir`.
template <class T>
Point<Dual<T>> seed(const Point<T>& x, int dir) {
  Point<Dual<T>> out;
  for (int i = 0; i < 4; ++i) out[i] = Dual<T>(x[i], T(i == dir ? 1.0 : 0.0));
  return out;
}

/// Second-order seed: inner derivative along `dir1`, outer along `dir2`.
/// For f evaluated at the result, f.v.v is the value, f.v.d = ∂f/∂x^dir1,
/// f.d.v = ∂f/∂x^dir2 and f.d.d = ∂²f/∂x^dir1∂x^dir2.
inline Point<Dual2> seed2(const Point<double>& x, int dir1, int dir2) { return seed(seed(x, dir1), dir2); }

}  // namespace hik
