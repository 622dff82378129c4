#pragma once

#include <stdexcept>
#include <string>

#include "hik/clifford.hpp"
#include "hik/frame.hpp"
#include "hik/metric.hpp"

namespace hik {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TetradError : public GeometryError {
 public:
  TetradError(const std::string& message, int pivot)
      : GeometryError(message + (pivot >= 0 ? " (pivot " + std::to_string(pivot) + ")" : "")), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Metric, inverse, first derivatives and Christoffel symbols at a point.
/// With T = Dual<U> every entry also carries its derivative along the seeded
/// direction of x.
template <class T>
struct LocalGeometry {
  Point<T> x;
  Mat4<T> g;
  Mat4<T> ginv;
  Tensor3<T> dg;     // dg[λ][μ][ν] = ∂_λ g_{μν}
  Tensor3<T> gamma;  // gamma[λ][μ][ν] = Γ^λ_{μν}

  CliffordContext<T> context() const { return {g, ginv}; }
};

/// Γ^λ_{μν} = ½ g^{λρ}(∂_μ g_{ρν} + ∂_ν g_{ρμ} − ∂_ρ g_{μν})
template <class T>
Tensor3<T> christoffel(const Mat4<T>& ginv, const Tensor3<T>& dg) {
  Tensor3<T> lowered;  // Γ_{ρμν}
  for (int r = 0; r < 4; ++r)
    for (int m = 0; m < 4; ++m)
      for (int n = m; n < 4; ++n) {
        lowered[r][m][n] = T(0.5) * (dg[m][r][n] + dg[n][r][m] - dg[r][m][n]);
        lowered[r][n][m] = lowered[r][m][n];
      }
  Tensor3<T> gamma;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = m; n < 4; ++n) {
        T s(0.0);
        for (int r = 0; r < 4; ++r) s += ginv[l][r] * lowered[r][m][n];
        gamma[l][m][n] = s;
        gamma[l][n][m] = s;
      }
  return gamma;
}

/// Derivatives of g come from four dual evaluations of the metric
/// expressions; throws expr::EvalError on domain failures and
/// GeometryError for a singular metric.
template <class T>
LocalGeometry<T> local_geometry(const MetricSpec& spec, const Point<T>& x) {
  LocalGeometry<T> geo;
  geo.x = x;
  for (int l = 0; l < 4; ++l) {
    const Mat4<Dual<T>> gd = spec.at(seed(x, l));
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        if (l == 0) geo.g[m][n] = gd[m][n].v;
        geo.dg[l][m][n] = gd[m][n].d;
      }
  }
  try {
    geo.ginv = inverse(geo.g);
  } catch (const SingularMatrixError& e) {
    throw GeometryError(std::string("singular metric: ") + e.what());
  }
  geo.gamma = christoffel(geo.ginv, geo.dg);
  return geo;
}

namespace detail {
Tetrad<double> eigen_tetrad(const Mat4<double>& g);
void check_signature_or_throw(const Mat4<double>& g);
}  // namespace detail

/// Orthonormal co-frame from g by a signature-aware LDLᵀ congruence: the
/// first coordinate with g_{μμ} > 0 is pivoted first (becoming ℓ^0), the
/// rest follow in declared order. For diagonal metrics this is
/// e^a_μ = √|g_{μμ}| δ^a_μ. Purely algebraic, so it differentiates through
/// dual numbers. Doubles fall back to an eigendecomposition (mode eigen,
/// not smooth) when the triangular route breaks down.
template <class T>
Tetrad<T> tetrad_from_metric(const Mat4<T>& g) {
  auto breakdown = [&](int pivot) -> Tetrad<T> {
    detail::check_signature_or_throw(to_double(g));
    if constexpr (std::is_same_v<T, double>) {
      return detail::eigen_tetrad(g);
    } else {
      throw TetradError("triangular tetrad pivot breakdown", pivot);
    }
  };

  int timelike = -1;
  for (int m = 0; m < 4; ++m) {
    if (value_of(g[m][m]) > 0.0) {
      timelike = m;
      break;
    }
  }
  if (timelike < 0) return breakdown(0);

  std::array<int, 4> order{timelike, 0, 0, 0};
  for (int m = 0, k = 1; m < 4; ++m)
    if (m != timelike) order[k++] = m;

  double scale = 0.0;
  for (const auto& row : g)
    for (const auto& v : row) scale = std::max(scale, std::fabs(value_of(v)));

  Mat4<T> lower = zero_mat<T>();
  std::array<T, 4> pivots;
  for (int k = 0; k < 4; ++k) {
    T d = g[order[k]][order[k]];
    for (int j = 0; j < k; ++j) d -= lower[k][j] * lower[k][j] * pivots[j];
    const double dv = value_of(d);
    const bool sign_ok = (k == 0) ? dv > 0.0 : dv < 0.0;
    if (!sign_ok || std::fabs(dv) <= 1e-12 * scale) return breakdown(k);
    pivots[k] = d;
    lower[k][k] = T(1.0);
    for (int i = k + 1; i < 4; ++i) {
      T s = g[order[i]][order[k]];
      for (int j = 0; j < k; ++j) s -= lower[i][j] * lower[k][j] * pivots[j];
      lower[i][k] = s / d;
    }
  }

  using std::sqrt;
  Mat4<T> coframe = zero_mat<T>();
  for (int k = 0; k < 4; ++k) {
    const T root = sqrt(k == 0 ? pivots[k] : -pivots[k]);
    for (int i = k; i < 4; ++i) coframe[k][order[i]] = root * lower[i][k];
  }

  bool diagonal = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && !is_zero(g[i][j])) diagonal = false;
  try {
    return Tetrad<T>::from_coframe(coframe, diagonal ? TetradMode::diagonal : TetradMode::triangular);
  } catch (const SingularMatrixError&) {
    throw TetradError("singular tetrad", -1);
  }
}

template <class T>
Tetrad<T> tetrad_at(const MetricSpec& spec, const Point<T>& x) {
  return tetrad_from_metric(spec.at(x));
}

/// Everything metric-derived at a chart point (plain doubles).
struct GeometryAtPoint {
  Point<double> x;
  Mat4<double> g;
  Mat4<double> ginv;
  Tensor3<double> dg;          // ∂_λ g_{μν}            [λ][μ][ν]
  Tensor3<double> gamma;       // Γ^λ_{μν}              [λ][μ][ν]
  Tensor4<double> dgamma;      // ∂_κ Γ^λ_{μν}          [κ][λ][μ][ν]
  Tensor4<double> riemann_up;  // R^ρ_{σμν}             [ρ][σ][μ][ν]
  Tensor4<double> riemann;     // R_{ρσμν}              [ρ][σ][μ][ν]
};

/// Throws GeometryError for out-of-domain points or a singular metric.
GeometryAtPoint geometry_at(const MetricSpec& spec, const Point<double>& x);

/// R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}
Tensor4<double> riemann_from(const Tensor3<double>& gamma, const Tensor4<double>& dgamma);

/// C_{μν} = ½ R_{αβμν} dx^α∧dx^β
MultivectorD curvature_bivector(const GeometryAtPoint& geo, int mu, int nu);

/// Throws ContextError unless g has signature (1,3).
void check_signature(const Mat4<double>& g);

}  // namespace hik
