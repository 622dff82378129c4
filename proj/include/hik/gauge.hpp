#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "hik/geometry.hpp"

namespace hik {

class RotationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Constant Lorentz matrix Λ^a_b that fixes ℓ^0 and acts orthogonally on
/// (ℓ^1, ℓ^2, ℓ^3).
class SpatialRotation {
 public:
  SpatialRotation() : matrix_(identity_mat<double>()) {}

  /// Throws RotationError unless the matrix preserves ℓ^0 and ΛᵀηΛ = η
  /// within 1e-12.
  static SpatialRotation from_matrix(const Mat4<double>& lorentz);
  /// Rotation by `angle` about a spatial axis (need not be normalized).
  static SpatialRotation axis_angle(const std::array<double, 3>& axis, double angle);

  const Mat4<double>& matrix() const { return matrix_; }
  bool is_identity() const { return matrix_ == identity_mat<double>(); }

 private:
  explicit SpatialRotation(const Mat4<double>& m) : matrix_(m) {}
  Mat4<double> matrix_;
};

/// Smooth tetrad field on a metric chart, optionally rotated by a constant
/// spatial rotation of the frame index.
class TetradField {
 public:
  explicit TetradField(MetricSpec spec, SpatialRotation rotation = {})
      : spec_(std::make_shared<const MetricSpec>(std::move(spec))), rotation_(rotation) {}

  const MetricSpec& metric() const { return *spec_; }
  const SpatialRotation& rotation() const { return rotation_; }

  template <class T>
  Tetrad<T> from_metric(const Mat4<T>& g) const {
    Tetrad<T> t = tetrad_from_metric(g);
    return rotation_.is_identity() ? t : rotate(t, rotation_.matrix());
  }

  template <class T>
  Tetrad<T> at(const Point<T>& x) const {
    return from_metric(spec_->at(x));
  }

 private:
  std::shared_ptr<const MetricSpec> spec_;
  SpatialRotation rotation_;
};

template <class T>
struct Hik {
  Multivector<T> H;
  Multivector<T> I;
  Multivector<T> K;
};

/// H = ℓ^0, I = ℓ^1∨ℓ^2, K = ℓ^1∨ℓ^3
template <class T>
Hik<T> hik_from_tetrad(const CliffordContext<T>& ctx, const Tetrad<T>& tetrad) {
  const auto l1 = tetrad.leg(1);
  return {tetrad.leg(0), clifford_mul(ctx, l1, tetrad.leg(2)), clifford_mul(ctx, l1, tetrad.leg(3))};
}

/// The additional structure (H, I, K) as fields over the chart.
class StructureTriple {
 public:
  explicit StructureTriple(TetradField tetrad) : tetrad_(std::move(tetrad)) {}

  const TetradField& tetrad() const { return tetrad_; }
  const MetricSpec& metric() const { return tetrad_.metric(); }

  template <class T>
  Hik<T> at(const Point<T>& x) const {
    const Mat4<T> g = metric().at(x);
    return hik_from_tetrad(CliffordContext<T>::from_metric(g), tetrad_.from_metric(g));
  }

 private:
  TetradField tetrad_;
};

inline StructureTriple build_HIK(TetradField tetrad) { return StructureTriple(std::move(tetrad)); }

/// Σ over form indices of u: dx^ν ↦ Γ^ν_{μρ} dx^ρ, extended as a derivation
/// of the exterior product. Υ_μ u = ∂_μ u − connection_action(Γ, μ, u).
template <class T>
Multivector<T> connection_action(const Tensor3<T>& gamma, int mu, const Multivector<T>& u) {
  Multivector<T> r;
  for (int a = 1; a < kBlades; ++a) {
    if (is_zero(u.at(a))) continue;
    int position = 0;
    for (int s = 0; s < kDim; ++s) {
      if (!((a >> s) & 1)) continue;
      const int rest = a & ~(1 << s);
      for (int rho = 0; rho < kDim; ++rho) {
        if ((rest >> rho) & 1) continue;
        const T& gam = gamma[s][mu][rho];
        if (is_zero(gam)) continue;
        // dx^ρ sits at `position`; move it to the front, then sort into rest.
        int sign = (position % 2) ? -1 : 1;
        sign *= reorder_sign(static_cast<std::uint8_t>(1 << rho), static_cast<std::uint8_t>(rest));
        const T term = u.at(a) * gam;
        if (sign > 0)
          r.at(rest | (1 << rho)) += term;
        else
          r.at(rest | (1 << rho)) -= term;
      }
      ++position;
    }
  }
  return r;
}

/// Υ_μ of a field at geo.x. `field` is callable on Point<S> for any scalar
/// S and returns Multivector<S>; it is evaluated once over Dual<T>.
template <class T, class Field>
Multivector<T> upsilon(const Field& field, const LocalGeometry<T>& geo, int mu) {
  const Multivector<Dual<T>> u = field(seed(geo.x, mu));
  return derivatives(u) - connection_action(geo.gamma, mu, values(u));
}

/// Values of H, I, K at a point together with Υ_ν of each, ν = 0..3.
template <class T>
struct HikJet {
  Hik<T> value;
  std::array<Hik<T>, 4> upsilon;
};

template <class T>
HikJet<T> hik_jet(const StructureTriple& triple, const LocalGeometry<T>& geo) {
  HikJet<T> jet;
  for (int nu = 0; nu < 4; ++nu) {
    const Hik<Dual<T>> d = triple.at(seed(geo.x, nu));
    if (nu == 0) jet.value = {values(d.H), values(d.I), values(d.K)};
    jet.upsilon[nu] = {derivatives(d.H) - connection_action(geo.gamma, nu, jet.value.H),
                       derivatives(d.I) - connection_action(geo.gamma, nu, jet.value.I),
                       derivatives(d.K) - connection_action(geo.gamma, nu, jet.value.K)};
  }
  return jet;
}

/// B_μ = −3/8 H Υ_μH + 1/4 (I Υ_μI + K Υ_μK) + 1/8 H (I Υ_μI + K Υ_μK) H
///       − 1/8 I K H Υ_μH K I − 1/8 (K I Υ_μI K + I K Υ_μK I)
/// with every juxtaposition a Clifford product. All grades are kept; the
/// grade-2 residual is measured by the verifier.
template <class T>
Multivector<T> compute_B(const CliffordContext<T>& ctx, const Hik<T>& f, const Hik<T>& up) {
  const auto& [H, I, K] = f;
  const auto mul = [&](const auto&... xs) { return clifford_mul(ctx, xs...); };
  const Multivector<T> J = mul(I, up.I) + mul(K, up.K);
  const Multivector<T> IK = mul(I, K);
  const Multivector<T> KI = mul(K, I);
  Multivector<T> b = mul(H, up.H) * T(-3.0 / 8.0);
  b += J * T(0.25);
  b += mul(H, J, H) * T(0.125);
  b -= mul(IK, H, up.H, KI) * T(0.125);
  b -= (mul(KI, up.I, K) + mul(IK, up.K, I)) * T(0.125);
  return b;
}

/// B_0..B_3 at geo.x.
template <class T>
std::array<Multivector<T>, 4> compute_connection(const StructureTriple& triple, const LocalGeometry<T>& geo) {
  const HikJet<T> jet = hik_jet(triple, geo);
  const CliffordContext<T> ctx = geo.context();
  std::array<Multivector<T>, 4> B;
  for (int mu = 0; mu < 4; ++mu) B[mu] = compute_B(ctx, jet.value, jet.upsilon[mu]);
  return B;
}

/// D_μU = Υ_μU − [B_μ, U]
template <class T>
Multivector<T> covariant_D(const CliffordContext<T>& ctx, const Multivector<T>& B_mu, const Multivector<T>& upsilon_mu_U,
                           const Multivector<T>& U) {
  return upsilon_mu_U - commutator(ctx, B_mu, U);
}

template <class T>
using PairTable = std::array<std::array<T, 4>, 4>;

/// B and its field strength at one point.
struct FieldStrength {
  std::array<MultivectorD, 4> B;
  PairTable<MultivectorD> dB;        // ∂_μ B_ν            [μ][ν]
  PairTable<MultivectorD> upsilonB;  // Υ_μ B_ν incl. −Γ^ρ_{μν}B_ρ
  PairTable<MultivectorD> F;         // F_{μν}, F_{νμ} = −F_{μν}
};

/// F_{μν} = D_μB_ν − D_νB_μ + [B_μ,B_ν], where D_μ on the Λ_2⊤_1 field B
/// includes the Christoffel term on the free index. ∂B comes from running
/// tetrad → Υ → B over dual numbers.
FieldStrength field_strength(const StructureTriple& triple, const Point<double>& x);

/// Second covariant derivative ∇_μ∇_νU of a field, [μ][ν].
template <class Field>
PairTable<MultivectorD> second_covariant(const MetricSpec& spec, const Field& field, const Point<double>& x) {
  PairTable<MultivectorD> out;
  std::array<MultivectorD, 4> w;
  Tensor3<double> gamma{};
  PairTable<MultivectorD> dw;
  for (int mu = 0; mu < 4; ++mu) {
    const LocalGeometry<Dual<double>> geo = local_geometry(spec, seed(x, mu));
    for (int nu = 0; nu < 4; ++nu) {
      const Multivector<Dual<double>> wd = upsilon(field, geo, nu);
      dw[mu][nu] = derivatives(wd);
      if (mu == 0) w[nu] = values(wd);
    }
    if (mu == 0)
      for (int l = 0; l < 4; ++l)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) gamma[l][a][b] = geo.gamma[l][a][b].v;
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      MultivectorD v = dw[mu][nu] - connection_action(gamma, mu, w[nu]);
      for (int rho = 0; rho < 4; ++rho) v -= w[rho] * gamma[rho][mu][nu];
      out[mu][nu] = v;
    }
  return out;
}

/// Multivector field whose coefficients are quadratic polynomials in
/// (x − center); used to probe [Υ_μ,Υ_ν].
class PolynomialField {
 public:
  struct Coefficient {
    double constant = 0.0;
    std::array<double, 4> linear{};
    Mat4<double> quadratic{};  // symmetric
  };

  PolynomialField(Point<double> center, std::array<Coefficient, kBlades> coefficients)
      : center_(center), coeffs_(coefficients) {}

  template <class S>
  Multivector<S> operator()(const Point<S>& x) const {
    std::array<S, 4> dx;
    for (int i = 0; i < 4; ++i) dx[i] = x[i] - S(center_[i]);
    Multivector<S> u;
    for (int a = 0; a < kBlades; ++a) {
      const auto& c = coeffs_[a];
      S v(c.constant);
      for (int i = 0; i < 4; ++i) {
        v += S(c.linear[i]) * dx[i];
        for (int j = 0; j < 4; ++j) v += S(0.5 * c.quadratic[i][j]) * dx[i] * dx[j];
      }
      u.at(a) = v;
    }
    return u;
  }

 private:
  Point<double> center_;
  std::array<Coefficient, kBlades> coeffs_;
};

/// Residuals of the six relations H²=1, I²=−1, K²=−1, [H,I]=0, [H,K]=0,
/// {I,K}=0 (max-abs, same order).
std::array<double, 6> algebraic_residuals(const CliffordContext<double>& ctx, const Hik<double>& f);

/// Residuals of {Υ_μH,H}, {Υ_μI,I}, {Υ_μK,K}, {Υ_μK,I}+{Υ_μI,K},
/// [Υ_μH,I]−[Υ_μI,H], [Υ_μH,K]−[Υ_μK,H] (max-abs, same order).
std::array<double, 6> proof_relation_residuals(const CliffordContext<double>& ctx, const Hik<double>& f,
                                               const Hik<double>& up);

/// Per-point measurements for one structure triple.
struct PointCheck {
  std::array<double, 6> eq3{};
  std::array<double, 3> eq2{};    // H, I, K; relative to max(Υ scale, 0.01)
  std::array<double, 6> proof{};  // max over μ
  double grade_purity = 0.0;      // max over μ of non-grade-2 part of B_μ
  double eq1 = 0.0;               // max over pairs of |F − ½C| / max(|½C|, 0.01)
  double commutator = 0.0;        // max over test fields and pairs
  double fc = 0.0;                // Σ ⟨F, C⟩ over components
  double cc = 0.0;                // Σ ⟨C, C⟩
  bool flat_b = true;             // every B_μ exactly zero
  double max_B = 0.0;
};

/// Floor on the scale of relative residuals.
inline constexpr double kRelativeFloor = 1e-2;

PointCheck check_point(const StructureTriple& triple, const Point<double>& x,
                       const std::vector<PolynomialField>& probes = {});

/// Rebuild H′, I′, K′ from a rotated tetrad and rerun the checks.
struct FrameCovariance {
  PointCheck primed;
  double max_B_change = 0.0;  // max_μ |B′_μ − B_μ|
};

FrameCovariance frame_covariance_check(const MetricSpec& spec, const Point<double>& x, const SpatialRotation& rotation,
                                       const std::vector<PolynomialField>& probes = {});

}  // namespace hik
