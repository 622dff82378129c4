#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "hik/scalar.hpp"

namespace hik {

template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

/// Γ[λ][μ][ν] style rank-3 array.
template <class T>
using Tensor3 = std::array<Mat4<T>, 4>;

template <class T>
using Tensor4 = std::array<Tensor3<T>, 4>;

template <class T>
Mat4<T> zero_mat() {
  Mat4<T> m;
  for (auto& row : m) row.fill(T(0.0));
  return m;
}

template <class T>
Mat4<T> identity_mat() {
  Mat4<T> m = zero_mat<T>();
  for (int i = 0; i < 4; ++i) m[i][i] = T(1.0);
  return m;
}

template <class T>
Mat4<T> matmul(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> r = zero_mat<T>();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

template <class T>
Mat4<T> transpose(const Mat4<T>& a) {
  Mat4<T> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[j][i];
  return r;
}

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss–Jordan inverse with partial pivoting on leading values. Throws
/// SingularMatrixError when a pivot falls below `rel_tol` times the largest
/// entry (exact zero test for rationals).
template <class T>
Mat4<T> inverse(const Mat4<T>& m, double rel_tol = 1e-13) {
  Mat4<T> a = m;
  Mat4<T> inv = identity_mat<T>();
  double scale = 0.0;
  for (const auto& row : m)
    for (const auto& x : row) scale = std::max(scale, std::fabs(value_of(x)));
  if (scale == 0.0) throw SingularMatrixError("singular matrix: all entries zero");
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    double best = std::fabs(value_of(a[col][col]));
    for (int r = col + 1; r < 4; ++r) {
      const double v = std::fabs(value_of(a[r][col]));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    const bool exact = std::is_same_v<T, Rational>;
    if ((exact && is_zero(a[pivot][col])) || (!exact && best <= rel_tol * scale))
      throw SingularMatrixError("singular matrix: pivot " + std::to_string(col) + " vanishes");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const T p = a[col][col];
    for (int j = 0; j < 4; ++j) {
      a[col][j] = a[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const T f = a[r][col];
      if (is_zero(f)) continue;
      for (int j = 0; j < 4; ++j) {
        a[r][j] = a[r][j] - f * a[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  return inv;
}

template <class T>
Mat4<double> to_double(const Mat4<T>& m) {
  Mat4<double> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = value_of(m[i][j]);
  return r;
}

/// Inertia (positive, negative, near-zero eigenvalue counts) of a symmetric
/// matrix; zero means |λ| ≤ rel_tol · max|λ|.
struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

Inertia inertia(const Mat4<double>& symmetric, double rel_tol = 1e-12);

/// Symmetric eigendecomposition: eigenvalues ascending, eigenvectors as
/// columns of `vectors`.
struct SymmetricEigen {
  std::array<double, 4> values;
  Mat4<double> vectors;
};

SymmetricEigen symmetric_eigen(const Mat4<double>& symmetric);

}  // namespace hik
