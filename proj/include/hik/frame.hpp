#pragma once

#include <stdexcept>

#include "hik/clifford.hpp"
#include "hik/kernels.hpp"
#include "hik/linalg.hpp"
#include "hik/multivector.hpp"

namespace hik {

enum class TetradMode { diagonal, triangular, eigen };

inline const char* mode_name(TetradMode m) {
  switch (m) {
    case TetradMode::diagonal: return "diagonal";
    case TetradMode::triangular: return "triangular";
    case TetradMode::eigen: return "eigen";
  }
  return "?";
}

/// Orthonormal co-frame ℓ^a = e^a_μ dx^μ with η = diag(+1,−1,−1,−1).
/// coframe[a][μ] = e^a_μ, frame[μ][a] = e^μ_a (so dx^μ = e^μ_a ℓ^a).
template <class T>
struct Tetrad {
  Mat4<T> coframe;
  Mat4<T> frame;
  TetradMode mode = TetradMode::triangular;

  /// Throws SingularMatrixError for a singular co-frame.
  static Tetrad from_coframe(const Mat4<T>& coframe, TetradMode mode = TetradMode::triangular) {
    return {coframe, inverse(coframe), mode};
  }

  /// ℓ^a as a grade-1 multivector in the coordinate basis.
  Multivector<T> leg(int a) const { return Multivector<T>::vector(coframe[a]); }
};

enum class FrameDirection { to_orthonormal, to_coordinate };

/// Extend the generator map dx^i ↦ Σ_j images[i][j] b^j to all blades.
template <class T>
Multivector<T> extend_linear(const Mat4<T>& images, const Multivector<T>& u) {
  std::array<Multivector<T>, kBlades> blade_image;
  blade_image[0] = Multivector<T>::scalar(T(1.0));
  for (int a = 1; a < kBlades; ++a) {
    const Blade blade(static_cast<std::uint8_t>(a));
    const int i = blade.lowest();
    blade_image[a] = wedge(Multivector<T>::vector(images[i]), blade_image[blade.without(i).mask()]);
  }
  Multivector<T> r;
  for (int a = 0; a < kBlades; ++a)
    if (!is_zero(u.at(a))) r += blade_image[a] * u.at(a);
  return r;
}

/// Componentwise basis change between the coordinate blades dx^S and the
/// orthonormal blades ℓ^A.
template <class T>
Multivector<T> change_frame(const Tetrad<T>& tetrad, const Multivector<T>& u, FrameDirection direction) {
  if (direction == FrameDirection::to_orthonormal) return extend_linear(tetrad.frame, u);
  return extend_linear(tetrad.coframe, u);
}

/// Product in the orthonormal (1,3) frame for any scalar realization.
template <class T>
Multivector<T> orthonormal_mul(const Multivector<T>& u, const Multivector<T>& v) {
  Multivector<T> r;
  for (int a = 0; a < kBlades; ++a) {
    if (is_zero(u.at(a))) continue;
    for (int b = 0; b < kBlades; ++b) {
      const int s = kernels::orthonormal_sign(a, b);
      const T term = u.at(a) * v.at(b);
      if (s > 0)
        r.at(a ^ b) += term;
      else
        r.at(a ^ b) -= term;
    }
  }
  return r;
}

/// Doubles go through the dispatched SIMD kernel.
inline MultivectorD orthonormal_mul(const MultivectorD& u, const MultivectorD& v) {
  MultivectorD r;
  kernels::orthonormal_mul(u.coefficients().data(), v.coefficients().data(), r.coefficients().data());
  return r;
}

/// Clifford product by the tetrad route: map both factors to the
/// orthonormal frame, multiply with the constant Gram η, map back.
template <class T>
Multivector<T> frame_product(const Tetrad<T>& tetrad, const Multivector<T>& u, const Multivector<T>& v) {
  const auto uo = change_frame(tetrad, u, FrameDirection::to_orthonormal);
  const auto vo = change_frame(tetrad, v, FrameDirection::to_orthonormal);
  return change_frame(tetrad, orthonormal_mul(uo, vo), FrameDirection::to_coordinate);
}

/// Apply a constant Lorentz matrix to the frame index: e′^a_μ = Λ^a_b e^b_μ.
template <class T>
Tetrad<T> rotate(const Tetrad<T>& tetrad, const Mat4<double>& lorentz) {
  Mat4<T> coframe = zero_mat<T>();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (lorentz[a][b] != 0.0)
        for (int mu = 0; mu < 4; ++mu) coframe[a][mu] += T(lorentz[a][b]) * tetrad.coframe[b][mu];
  return Tetrad<T>::from_coframe(coframe, tetrad.mode);
}

}  // namespace hik
