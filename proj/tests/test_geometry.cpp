#include <doctest.h>

#include "hik/geometry.hpp"
#include "oracles.hpp"

using namespace hik;

namespace {

const std::string kSkew = std::string(HIK_TEST_DATA) + "/skew.metric";

std::vector<MetricSpec> all_metrics() {
  std::vector<MetricSpec> out;
  for (const auto& e : catalog()) out.push_back(builtin_metric(e.name));
  out.push_back(load_metric_file(kSkew));
  return out;
}

double relative(double diff, double scale) { return diff / std::max(scale, 1e-300); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("minkowski is flat") {
  const MetricSpec spec = builtin_metric("minkowski");
  const GeometryAtPoint geo = geometry_at(spec, {0.1, 0.2, -0.3, 1.0});
  CHECK(test::max_abs_all(geo.gamma) == 0.0);
  CHECK(test::max_abs_all(geo.riemann) == 0.0);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) CHECK(curvature_bivector(geo, m, n) == MultivectorD());
}

TEST_CASE("flrw christoffels match finite differences at t = 0") {
  const MetricSpec spec = builtin_metric("flrw-exp");
  const Point<double> x{0.0, 0.1, -0.2, 0.3};
  const GeometryAtPoint geo = geometry_at(spec, x);
  CHECK(test::max_abs_diff(geo.gamma, test::fd_christoffel(spec, x)) <= 1e-7);
  // Γ^0_{ii} = e^{2t}, Γ^i_{0i} = 1
  CHECK(geo.gamma[0][1][1] == doctest::Approx(1.0));
  CHECK(geo.gamma[2][0][2] == doctest::Approx(1.0));
}

TEST_CASE("schwarzschild riemann matches finite differences at r = 10") {
  const MetricSpec spec = builtin_metric("schwarzschild");
  const Point<double> x{0.5, 10.0, 1.1, 0.4};
  const GeometryAtPoint geo = geometry_at(spec, x);
  const Tensor4<double> fd = test::fd_riemann(spec, x);
  CHECK(relative(test::max_abs_diff(geo.riemann_up, fd), test::max_abs_all(fd)) <= 1e-5);
  // R^t_{rtr} = 2M / (r^2 (r - 2M)), worked by hand from Γ^t_{tr} and Γ^r_{rr}
  CHECK(geo.riemann_up[0][1][0][1] == doctest::Approx(2.0 / (100 * 8)).epsilon(1e-12));
}

TEST_CASE("christoffel and riemann agree with the oracle across metrics") {
  test::Random rng(31);
  for (const auto& spec : all_metrics()) {
    for (int n = 0; n < 10; ++n) {
      const Point<double> x = test::random_point(spec, rng);
      const GeometryAtPoint geo = geometry_at(spec, x);
      const Tensor3<double> fg = test::fd_christoffel(spec, x);
      const Tensor4<double> fr = test::fd_riemann(spec, x);
      INFO(spec.name());
      CHECK(test::max_abs_diff(geo.gamma, fg) <= 1e-5 * std::max(1.0, test::max_abs_all(fg)));
      CHECK(test::max_abs_diff(geo.riemann_up, fr) <= 1e-5 * std::max(1e-2, test::max_abs_all(fr)));
    }
  }
}

TEST_CASE("riemann symmetries, first bianchi, metric compatibility") {
  test::Random rng(32);
  for (const auto& spec : all_metrics()) {
    for (int n = 0; n < 20; ++n) {
      const GeometryAtPoint geo = geometry_at(spec, test::random_point(spec, rng));
      const double scale = std::max(test::max_abs_all(geo.riemann), 1e-300);
      double asym = 0.0, bianchi = 0.0, compat = 0.0, lower = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int m = 0; m < 4; ++m)
            for (int v = 0; v < 4; ++v) {
              const auto& R = geo.riemann;
              asym = std::max({asym, std::fabs(R[a][b][m][v] + R[b][a][m][v]), std::fabs(R[a][b][m][v] + R[a][b][v][m]),
                               std::fabs(R[a][b][m][v] - R[m][v][a][b])});
              bianchi = std::max(bianchi, std::fabs(R[a][b][m][v] + R[a][m][v][b] + R[a][v][b][m]));
            }
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
          for (int v = 0; v < 4; ++v) {
            double c = geo.dg[l][m][v];
            for (int r = 0; r < 4; ++r) c -= geo.gamma[r][l][m] * geo.g[r][v] + geo.gamma[r][l][v] * geo.g[m][r];
            compat = std::max(compat, std::fabs(c));
            lower = std::max(lower, std::fabs(geo.gamma[l][m][v] - geo.gamma[l][v][m]));
          }
      INFO(spec.name());
      CHECK(asym / scale <= 1e-8);
      CHECK(bianchi / scale <= 1e-8);
      CHECK(compat <= 1e-9);
      CHECK(lower == 0.0);
    }
  }
}

TEST_CASE("de sitter has constant curvature") {
  const MetricSpec spec = builtin_metric("de-sitter");
  test::Random rng(33);
  for (int n = 0; n < 20; ++n) {
    const GeometryAtPoint geo = geometry_at(spec, test::random_point(spec, rng));
    const auto& g = geo.g;
    const double K = geo.riemann[0][1][0][1] / (g[0][0] * g[1][1] - g[0][1] * g[0][1]);
    double diff = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int m = 0; m < 4; ++m)
          for (int v = 0; v < 4; ++v)
            diff = std::max(diff,
                            std::fabs(geo.riemann[a][b][m][v] - K * (g[a][m] * g[b][v] - g[a][v] * g[b][m])));
    CHECK(diff / test::max_abs_all(geo.riemann) <= 1e-6);
    CHECK(std::fabs(K) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));  // λ/3
  }
}

TEST_CASE("curvature bivector is antisymmetric") {
  const MetricSpec spec = builtin_metric("schwarzschild");
  const GeometryAtPoint geo = geometry_at(spec, {0, 7, 1.2, 2});
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) CHECK(curvature_bivector(geo, m, n) == -curvature_bivector(geo, n, m));
  CHECK(grade_complement(curvature_bivector(geo, 0, 1), 2) == MultivectorD());
}

TEST_CASE("out-of-domain and singular points") {
  const MetricSpec spec = builtin_metric("schwarzschild");
  CHECK_THROWS_AS(geometry_at(spec, {0, 2.5, 1, 1}), GeometryError);
  CHECK_THROWS_AS(geometry_at(spec, {0, 6, 0.1, 1}), GeometryError);
  const MetricSpec zero = parse_metric_file("coords: t x y z\ndomain t: (0,1)\ndomain x: (0,1)\ndomain y: (0,1)\n"
                                            "domain z: (0,1)\ng 0 0: 1\ng 1 1: -1\ng 2 2: -1\ng 3 3: 0*x\n",
                                            "zero");
  CHECK_THROWS_AS(geometry_at(zero, {0.5, 0.5, 0.5, 0.5}), GeometryError);
}

TEST_CASE("diagonal tetrads are square roots") {
  CHECK(tetrad_at(builtin_metric("minkowski"), Point<double>{0, 0, 0, 0}).coframe == identity_mat<double>());
  const MetricSpec spec = builtin_metric("schwarzschild");
  const Tetrad<double> t = tetrad_at(spec, Point<double>{0, 6, 1.0, 0.5});
  CHECK(t.mode == TetradMode::diagonal);
  CHECK(t.coframe[0][0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(t.coframe[2][2] == doctest::Approx(6.0));
  CHECK(t.coframe[0][1] == 0.0);
}

TEST_CASE("tetrad congruence on random lorentzian matrices") {
  test::Random rng(34);
  const double eta[4] = {1, -1, -1, -1};
  for (int n = 0; n < 200; ++n) {
    const Mat4<double> g = rng.lorentzian_metric(0.5);
    const Tetrad<double> t = tetrad_from_metric(g);
    double diff = 0.0, ortho = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int v = 0; v < 4; ++v) {
        double s = 0.0;
        for (int a = 0; a < 4; ++a) s += t.coframe[a][m] * t.coframe[a][v] * eta[a];
        diff = std::max(diff, std::fabs(s - g[m][v]));
      }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double s = 0.0;
        for (int m = 0; m < 4; ++m) s += t.coframe[a][m] * t.frame[m][b];
        ortho = std::max(ortho, std::fabs(s - (a == b ? 1.0 : 0.0)));
      }
    CHECK(diff <= 1e-10);
    CHECK(ortho <= 1e-10);
  }
}

TEST_CASE("eigen fallback and breakdown reporting") {
  Mat4<double> g = zero_mat<double>();  // null coordinate pair: no positive diagonal entry
  g[0][1] = g[1][0] = 1.0;
  g[2][2] = g[3][3] = -1.0;
  const Tetrad<double> t = tetrad_from_metric(g);
  CHECK(t.mode == TetradMode::eigen);
  const double eta[4] = {1, -1, -1, -1};
  for (int m = 0; m < 4; ++m)
    for (int v = 0; v < 4; ++v) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a) s += t.coframe[a][m] * t.coframe[a][v] * eta[a];
      CHECK(std::fabs(s - g[m][v]) <= 1e-12);
    }

  Mat4<Dual<double>> gd;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gd[i][j] = g[i][j];
  try {
    tetrad_from_metric(gd);
    FAIL("expected TetradError");
  } catch (const TetradError& e) {
    CHECK(e.pivot() == 0);
  }

  Mat4<double> bad = identity_mat<double>();  // signature (2,2)
  bad[2][2] = bad[3][3] = -1.0;
  CHECK_THROWS_AS(tetrad_from_metric(bad), TetradError);
  CHECK_THROWS_AS(check_signature(bad), ContextError);
}

TEST_CASE("tetrads are smooth under dual evaluation") {
  test::Random rng(35);
  const double h = 1e-6;
  for (const auto& spec : {builtin_metric("schwarzschild"), builtin_metric("flrw-exp"), load_metric_file(kSkew)}) {
    for (int n = 0; n < 10; ++n) {
      const Point<double> x = test::random_point(spec, rng);
      for (int k = 0; k < 4; ++k) {
        const Tetrad<Dual<double>> td = tetrad_at(spec, seed(x, k));
        const Tetrad<double> tp = tetrad_at(spec, test::shifted(x, k, h));
        const Tetrad<double> tm = tetrad_at(spec, test::shifted(x, k, -h));
        CHECK(td.mode != TetradMode::eigen);
        double diff = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int m = 0; m < 4; ++m)
            diff = std::max(diff, std::fabs(td.coframe[a][m].d - (tp.coframe[a][m] - tm.coframe[a][m]) / (2 * h)));
        INFO(spec.name());
        CHECK(diff <= 1e-6);
      }
    }
  }
  CHECK(tetrad_at(load_metric_file(kSkew), Point<double>{0.1, 0.2, 0.3, 0.4}).mode == TetradMode::triangular);
}

}
