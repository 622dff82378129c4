#include "hik/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace hik {

SpatialRotation SpatialRotation::from_matrix(const Mat4<double>& m) {
  for (int a = 0; a < 4; ++a) {
    const double want = a == 0 ? 1.0 : 0.0;
    if (std::fabs(m[0][a] - want) > 1e-12 || std::fabs(m[a][0] - want) > 1e-12)
      throw RotationError("frame rotation must leave l^0 fixed");
  }
  for (int a = 1; a < 4; ++a)
    for (int b = 1; b < 4; ++b) {
      double dot = 0.0;
      for (int c = 1; c < 4; ++c) dot += m[c][a] * m[c][b];
      if (std::fabs(dot - (a == b ? 1.0 : 0.0)) > 1e-12) throw RotationError("frame rotation is not orthogonal");
    }
  return SpatialRotation(m);
}

SpatialRotation SpatialRotation::axis_angle(const std::array<double, 3>& axis, double angle) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(n > 0.0)) throw RotationError("rotation axis must be non-zero");
  const double x = axis[0] / n, y = axis[1] / n, z = axis[2] / n;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat4<double> m = identity_mat<double>();
  m[1][1] = c + x * x * t;
  m[1][2] = x * y * t - z * s;
  m[1][3] = x * z * t + y * s;
  m[2][1] = y * x * t + z * s;
  m[2][2] = c + y * y * t;
  m[2][3] = y * z * t - x * s;
  m[3][1] = z * x * t - y * s;
  m[3][2] = z * y * t + x * s;
  m[3][3] = c + z * z * t;
  return from_matrix(m);
}

FieldStrength field_strength(const StructureTriple& triple, const Point<double>& x) {
  FieldStrength fs;
  Tensor3<double> gamma{};
  for (int mu = 0; mu < 4; ++mu) {
    const LocalGeometry<Dual<double>> geo = local_geometry(triple.metric(), seed(x, mu));
    const auto B = compute_connection(triple, geo);
    for (int nu = 0; nu < 4; ++nu) {
      fs.dB[mu][nu] = derivatives(B[nu]);
      if (mu == 0) fs.B[nu] = values(B[nu]);
    }
    if (mu == 0)
      for (int l = 0; l < 4; ++l)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) gamma[l][a][b] = geo.gamma[l][a][b].v;
  }

  const CliffordContext<double> ctx = CliffordContext<double>::from_metric(triple.metric().at(x));
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      MultivectorD v = fs.dB[mu][nu] - connection_action(gamma, mu, fs.B[nu]);
      for (int rho = 0; rho < 4; ++rho) v -= fs.B[rho] * gamma[rho][mu][nu];
      fs.upsilonB[mu][nu] = v;
    }
  for (int mu = 0; mu < 4; ++mu) {
    fs.F[mu][mu] = MultivectorD();
    for (int nu = mu + 1; nu < 4; ++nu) {
      const MultivectorD bb = commutator(ctx, fs.B[mu], fs.B[nu]);
      const MultivectorD d_mu_nu = fs.upsilonB[mu][nu] - bb;                           // D_μB_ν
      const MultivectorD d_nu_mu = fs.upsilonB[nu][mu] - commutator(ctx, fs.B[nu], fs.B[mu]);  // D_νB_μ
      fs.F[mu][nu] = d_mu_nu - d_nu_mu + bb;
      fs.F[nu][mu] = -fs.F[mu][nu];
    }
  }
  return fs;
}

std::array<double, 6> algebraic_residuals(const CliffordContext<double>& ctx, const Hik<double>& f) {
  const MultivectorD one = MultivectorD::scalar(1.0);
  return {
      max_abs_coeff(clifford_mul(ctx, f.H, f.H) - one),
      max_abs_coeff(clifford_mul(ctx, f.I, f.I) + one),
      max_abs_coeff(clifford_mul(ctx, f.K, f.K) + one),
      max_abs_coeff(commutator(ctx, f.H, f.I)),
      max_abs_coeff(commutator(ctx, f.H, f.K)),
      max_abs_coeff(anticommutator(ctx, f.I, f.K)),
  };
}

std::array<double, 6> proof_relation_residuals(const CliffordContext<double>& ctx, const Hik<double>& f,
                                               const Hik<double>& up) {
  return {
      max_abs_coeff(anticommutator(ctx, up.H, f.H)),
      max_abs_coeff(anticommutator(ctx, up.I, f.I)),
      max_abs_coeff(anticommutator(ctx, up.K, f.K)),
      max_abs_coeff(anticommutator(ctx, up.K, f.I) + anticommutator(ctx, up.I, f.K)),
      max_abs_coeff(commutator(ctx, up.H, f.I) - commutator(ctx, up.I, f.H)),
      max_abs_coeff(commutator(ctx, up.H, f.K) - commutator(ctx, up.K, f.H)),
  };
}

namespace {

double relative(double residual, double scale) { return residual / std::max(scale, kRelativeFloor); }

}  // namespace

PointCheck check_point(const StructureTriple& triple, const Point<double>& x, const std::vector<PolynomialField>& probes) {
  const MetricSpec& spec = triple.metric();
  PointCheck out;
  const LocalGeometry<double> geo = local_geometry(spec, x);
  const CliffordContext<double> ctx = geo.context();
  const HikJet<double> jet = hik_jet(triple, geo);

  out.eq3 = algebraic_residuals(ctx, jet.value);

  std::array<MultivectorD, 4> B;
  for (int mu = 0; mu < 4; ++mu) {
    B[mu] = compute_B(ctx, jet.value, jet.upsilon[mu]);
    out.grade_purity = std::max(out.grade_purity, max_abs_coeff(grade_complement(B[mu], 2)));
    out.max_B = std::max(out.max_B, max_abs_coeff(B[mu]));
    for (double c : B[mu].coefficients()) out.flat_b = out.flat_b && c == 0.0;
    const auto proof = proof_relation_residuals(ctx, jet.value, jet.upsilon[mu]);
    for (int k = 0; k < 6; ++k) out.proof[k] = std::max(out.proof[k], proof[k]);
  }

  std::array<double, 3> num{}, den{};
  for (int mu = 0; mu < 4; ++mu) {
    const auto& v = jet.value;
    const auto& u = jet.upsilon[mu];
    num[0] = std::max(num[0], max_abs_coeff(covariant_D(ctx, B[mu], u.H, v.H)));
    num[1] = std::max(num[1], max_abs_coeff(covariant_D(ctx, B[mu], u.I, v.I)));
    num[2] = std::max(num[2], max_abs_coeff(covariant_D(ctx, B[mu], u.K, v.K)));
    den[0] = std::max(den[0], max_abs_coeff(u.H));
    den[1] = std::max(den[1], max_abs_coeff(u.I));
    den[2] = std::max(den[2], max_abs_coeff(u.K));
  }
  for (int k = 0; k < 3; ++k) out.eq2[k] = relative(num[k], den[k]);

  const GeometryAtPoint G = geometry_at(spec, x);
  const FieldStrength fs = field_strength(triple, x);
  PairTable<MultivectorD> halfC;
  double diff = 0.0, scale = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const MultivectorD C = curvature_bivector(G, mu, nu);
      halfC[mu][nu] = C * 0.5;
      diff = std::max(diff, max_abs_coeff(fs.F[mu][nu] - halfC[mu][nu]));
      scale = std::max(scale, max_abs_coeff(halfC[mu][nu]));
      for (int a = 0; a < kBlades; ++a) {
        out.fc += fs.F[mu][nu].at(a) * C.at(a);
        out.cc += C.at(a) * C.at(a);
      }
    }
  out.eq1 = relative(diff, scale);

  auto probe = [&](const auto& field) {
    const auto nn = second_covariant(spec, field, x);
    const MultivectorD u = field(x);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        const MultivectorD expected = commutator(ctx, halfC[mu][nu], u);
        const MultivectorD got = nn[mu][nu] - nn[nu][mu];
        out.commutator = std::max(out.commutator, relative(max_abs_coeff(got - expected), max_abs_coeff(expected)));
      }
  };
  for (const auto& field : probes) probe(field);
  probe([&](const auto& p) { return triple.at(p).H; });
  probe([&](const auto& p) { return triple.at(p).I; });
  probe([&](const auto& p) { return triple.at(p).K; });
  return out;
}

FrameCovariance frame_covariance_check(const MetricSpec& spec, const Point<double>& x, const SpatialRotation& rotation,
                                       const std::vector<PolynomialField>& probes) {
  const StructureTriple base{TetradField(spec)};
  const StructureTriple primed(TetradField(spec, rotation));
  FrameCovariance out;
  out.primed = check_point(primed, x, probes);

  const LocalGeometry<double> geo = local_geometry(spec, x);
  const auto B = compute_connection(base, geo);
  const auto Bp = compute_connection(primed, geo);
  for (int mu = 0; mu < 4; ++mu) out.max_B_change = std::max(out.max_B_change, max_abs_coeff(Bp[mu] - B[mu]));
  return out;
}

}  // namespace hik
