#include <doctest.h>

#include "hik/gauge.hpp"
#include "hik/verify.hpp"
#include "oracles.hpp"

using namespace hik;

namespace {

MultivectorD dx(int i) { return MultivectorD::blade(Blade::generator(i)); }

StructureTriple triple_for(const std::string& name) { return StructureTriple{TetradField(builtin_metric(name))}; }

std::vector<PolynomialField> probes(const Point<double>& x, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return sample_probes(rng, x, count);
}

double max_D(const StructureTriple& triple, const Point<double>& x) {
  const LocalGeometry<double> geo = local_geometry(triple.metric(), x);
  const auto ctx = geo.context();
  const auto jet = hik_jet(triple, geo);
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const auto B = compute_B(ctx, jet.value, jet.upsilon[mu]);
    worst = std::max({worst, max_abs_coeff(covariant_D(ctx, B, jet.upsilon[mu].H, jet.value.H)),
                      max_abs_coeff(covariant_D(ctx, B, jet.upsilon[mu].I, jet.value.I)),
                      max_abs_coeff(covariant_D(ctx, B, jet.upsilon[mu].K, jet.value.K))});
  }
  return worst;
}

}  // namespace

TEST_SUITE("gauge") {

TEST_CASE("minkowski structure") {
  const StructureTriple t = triple_for("minkowski");
  const Hik<double> f = t.at(Point<double>{0.3, 1, 2, -1});
  CHECK(f.H == dx(0));
  CHECK(f.I == wedge(dx(1), dx(2)));
  CHECK(f.K == wedge(dx(1), dx(3)));
  const PointCheck pc = check_point(t, {0.3, 1, 2, -1});
  CHECK(pc.flat_b);
  CHECK(pc.eq1 == 0.0);
  for (double r : pc.proof) CHECK(r == 0.0);
  for (double r : pc.eq3) CHECK(r == 0.0);
}

TEST_CASE("algebraic relations at every sampled point") {
  for (const auto& e : catalog()) {
    const StructureTriple t = triple_for(e.name);
    for (const auto& x : sample_points(t.metric(), 30, 7)) {
      const auto res = algebraic_residuals(CliffordContext<double>::from_metric(t.metric().at(x)), t.at(x));
      for (double r : res) CHECK(r <= 1e-10);
    }
  }
  const StructureTriple flrw = triple_for("flrw-exp");
  const Point<double> x{0.3, 0.1, 0.2, 0.3};
  const auto ctx = CliffordContext<double>::from_metric(flrw.metric().at(x));
  const Hik<double> f = flrw.at(x);
  CHECK(max_abs_coeff(clifford_mul(ctx, f.H, f.H) - MultivectorD::scalar(1.0)) <= 1e-12);
  CHECK(grade_complement(f.H, 1) == MultivectorD());
  CHECK(max_abs_coeff(grade_complement(f.I, 2)) <= 1e-15);
}

TEST_CASE("upsilon annihilates constants and obeys leibniz") {
  const MetricSpec mink = builtin_metric("minkowski");
  const auto constant = [](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    return Multivector<S>::blade(Blade(0b0110), S(2.5)) + Multivector<S>::scalar(S(1.0));
  };
  const auto geo_m = local_geometry(mink, Point<double>{0, 1, 1, 1});
  for (int mu = 0; mu < 4; ++mu) CHECK(upsilon(constant, geo_m, mu) == MultivectorD());

  const MetricSpec spec = builtin_metric("schwarzschild");
  const Point<double> x{0.2, 8.0, 1.1, 0.7};
  const auto geo = local_geometry(spec, x);
  const auto one = [](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    return Multivector<S>::scalar(S(1.0));
  };
  for (int mu = 0; mu < 4; ++mu) CHECK(upsilon(one, geo, mu) == MultivectorD());

  // Random fields built from products of tetrad legs.
  test::Random rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::array<double, 16> cu, cv;
    for (auto& c : cu) c = rng.uniform(-1, 1);
    for (auto& c : cv) c = rng.uniform(-1, 1);
    auto leg_field = [&spec](const std::array<double, 16>& c) {
      return [&spec, c](const auto& p) {
        using S = std::decay_t<decltype(p[0])>;
        const Mat4<S> g = spec.at(p);
        const auto ctx = CliffordContext<S>::from_metric(g);
        const Tetrad<S> t = tetrad_from_metric(g);
        Multivector<S> u;
        for (int a = 0; a < kBlades; ++a) {
          Multivector<S> prod = Multivector<S>::scalar(S(1.0));
          for (int i = 0; i < 4; ++i)
            if (a >> i & 1) prod = clifford_mul(ctx, prod, t.leg(i));
          u += prod * S(c[a]);
        }
        return u;
      };
    };
    const auto U = leg_field(cu);
    const auto V = leg_field(cv);
    const auto UV = [&](const auto& p) {
      using S = std::decay_t<decltype(p[0])>;
      return clifford_mul(CliffordContext<S>::from_metric(spec.at(p)), U(p), V(p));
    };
    const auto ctx = geo.context();
    for (int mu = 0; mu < 4; ++mu) {
      const MultivectorD lhs = upsilon(UV, geo, mu);
      const MultivectorD rhs =
          clifford_mul(ctx, upsilon(U, geo, mu), V(x)) + clifford_mul(ctx, U(x), upsilon(V, geo, mu));
      CHECK(max_abs_coeff(lhs - rhs) <= 1e-8);
    }
  }
}

TEST_CASE("B vanishes for a constant tetrad") {
  const StructureTriple t = triple_for("minkowski");
  const auto B = compute_connection(t, local_geometry(t.metric(), Point<double>{1, 2, 3, 4}));
  for (const auto& b : B) CHECK(b == MultivectorD());
}

TEST_CASE("covariant constancy") {
  CHECK(max_D(triple_for("flrw-exp"), {0.5, 0.1, -0.2, 0.3}) <= 1e-8);
  CHECK(max_D(triple_for("schwarzschild"), {0.0, 6.0, 1.0, 0.5}) <= 1e-8);
  CHECK(max_D(triple_for("de-sitter"), {0.0, 1.0, 1.3, 2.0}) <= 1e-8);
  CHECK(max_D(StructureTriple{TetradField(load_metric_file(std::string(HIK_TEST_DATA) + "/skew.metric"))},
              {0.1, -0.3, 0.4, 0.2}) <= 1e-8);
}

TEST_CASE("D reduces to upsilon when B = 0") {
  const auto ctx = CliffordContext<double>::minkowski();
  test::Random rng(42);
  const auto u = rng.multivector(), up = rng.multivector();
  CHECK(covariant_D(ctx, MultivectorD(), up, u) == up);
}

TEST_CASE("B is pure grade 2 and tensorial") {
  const StructureTriple t = triple_for("schwarzschild");
  const PointCheck pc = check_point(t, {0.0, 6.0, 1.0, 0.5});
  CHECK(pc.grade_purity <= 1e-10);
  CHECK_FALSE(pc.flat_b);
}

TEST_CASE("field strength equals half the curvature") {
  const StructureTriple t = triple_for("schwarzschild");
  const Point<double> x{0.0, 6.0, 1.0, 0.5};
  const FieldStrength fs = field_strength(t, x);
  const GeometryAtPoint geo = geometry_at(t.metric(), x);
  for (int m = 0; m < 4; ++m) {
    CHECK(fs.F[m][m] == MultivectorD());
    for (int n = 0; n < 4; ++n) {
      CHECK(fs.F[m][n] + fs.F[n][m] == MultivectorD());
      const MultivectorD half = curvature_bivector(geo, m, n) * 0.5;
      CHECK(max_abs_coeff(fs.F[m][n] - half) <= 1e-6 * std::max(max_abs_coeff(half), 1e-2));
    }
  }
  // Same F from the finite-difference route on B.
  const double h = 1e-5;
  for (int m = 0; m < 4; ++m) {
    const auto Bp = compute_connection(t, local_geometry(t.metric(), test::shifted(x, m, h)));
    const auto Bm = compute_connection(t, local_geometry(t.metric(), test::shifted(x, m, -h)));
    for (int n = 0; n < 4; ++n) CHECK(max_abs_coeff(fs.dB[m][n] - (Bp[n] - Bm[n]) * (0.5 / h)) <= 1e-6);
  }
}

TEST_CASE("proof relations") {
  for (const auto& [name, x] : std::vector<std::pair<std::string, Point<double>>>{
           {"minkowski", {0, 0, 0, 0}}, {"flrw-exp", {0.7, 0.1, 0.2, 0.3}}, {"schwarzschild", {0.0, 12.0, 1.0, 0.5}}}) {
    const StructureTriple t = triple_for(name);
    const PointCheck pc = check_point(t, x);
    for (double r : pc.proof) CHECK(r <= 1e-9);
  }
}

TEST_CASE("curvature commutator anchor with 20 random fields") {
  const StructureTriple t = triple_for("schwarzschild");
  const Point<double> x{0.0, 10.0, 1.2, 0.3};
  const PointCheck pc = check_point(t, x, probes(x, 20, 99));
  CHECK(pc.commutator <= 1e-6);

  // The opposite sign convention for C is rejected.
  const GeometryAtPoint geo = geometry_at(t.metric(), x);
  const auto ctx = CliffordContext<double>::from_metric(geo.g);
  const auto field = probes(x, 1, 5)[0];
  const auto nn = second_covariant(t.metric(), field, x);
  const MultivectorD got = nn[0][1] - nn[1][0];
  const MultivectorD flipped = commutator(ctx, curvature_bivector(geo, 0, 1) * -0.5, field(x));
  CHECK(max_abs_coeff(got - flipped) > 1e-3 * max_abs_coeff(flipped));
}

TEST_CASE("frame covariance") {
  const MetricSpec spec = builtin_metric("schwarzschild");
  const Point<double> x{0.0, 7.0, 1.0, 0.5};
  const auto p = probes(x, 2, 3);

  const FrameCovariance same = frame_covariance_check(spec, x, SpatialRotation{}, p);
  CHECK(same.max_B_change == 0.0);

  const FrameCovariance quarter =
      frame_covariance_check(builtin_metric("flrw-exp"), {0.5, 0, 0, 0}, SpatialRotation::axis_angle({1, 0, 0}, M_PI / 2), p);
  for (double r : quarter.primed.eq2) CHECK(r <= 1e-8);

  test::Random rng(43);
  for (int n = 0; n < 3; ++n) {
    const auto R = SpatialRotation::axis_angle({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                               rng.uniform(0, 2 * M_PI));
    const FrameCovariance fc = frame_covariance_check(spec, x, R, p);
    CHECK(fc.primed.eq1 <= 1e-6);
    for (double r : fc.primed.eq3) CHECK(r <= 1e-10);
    for (double r : fc.primed.eq2) CHECK(r <= 1e-8);
    CHECK(fc.max_B_change <= 1e-12);  // constant rotations leave B unchanged
  }
}

TEST_CASE("rotation validation") {
  Mat4<double> m = identity_mat<double>();
  m[1][1] = 1.1;
  CHECK_THROWS_AS(SpatialRotation::from_matrix(m), RotationError);
  m = identity_mat<double>();
  m[0][1] = 0.1;
  CHECK_THROWS_AS(SpatialRotation::from_matrix(m), RotationError);
  CHECK_THROWS_AS(SpatialRotation::axis_angle({0, 0, 0}, 1.0), RotationError);
  CHECK(SpatialRotation{}.is_identity());
}

}
