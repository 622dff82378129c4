// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "hik/verify.hpp"
#include "oracles.hpp"

using namespace hik;

namespace {

constexpr int kPoints = 100;
constexpr std::uint64_t kSeed = 20240601;

constexpr double kTolEq3 = 1e-10;
constexpr double kTolEq2 = 1e-8;
constexpr double kTolEq1 = 1e-6;
constexpr double kTolProof = 1e-9;
constexpr double kTolFlat = 1e-14;
constexpr double kTolCommutator = 1e-6;
constexpr double kTolCrossRep = 1e-12;
constexpr double kTolOracle = 1e-5;
constexpr double kRatioLo = 0.4999;
constexpr double kRatioHi = 0.5001;

constexpr double kLimitEq3 = 5.0;
constexpr double kLimitEq2 = 20.0;
constexpr double kLimitEq1 = 30.0;
constexpr double kLimitFull = 60.0;

const char* kBuiltins[] = {"minkowski", "schwarzschild", "flrw-exp", "de-sitter"};
const char* kCurved[] = {"schwarzschild", "flrw-exp", "de-sitter"};

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double residual, double scale) { return residual / std::max(scale, kRelativeFloor); }

StructureTriple triple(const std::string& name) { return StructureTriple{TetradField(builtin_metric(name))}; }

void eq3_suite() {
  double worst = 0.0;
  const double t = seconds([&] {
    for (const char* name : kBuiltins) {
      const StructureTriple s = triple(name);
      for (const auto& x : sample_points(s.metric(), kPoints, kSeed)) {
        const auto ctx = CliffordContext<double>::from_metric(s.metric().at(x));
        for (double r : algebraic_residuals(ctx, s.at(x))) worst = std::max(worst, r);
      }
    }
  });
  report(worst <= kTolEq3 && t <= kLimitEq3, "eq3 algebraic relations",
         fmt("max %.2e <= %.0e over 4x%.0f points; %.3f s <= 5 s", worst, kTolEq3, kPoints, t));
}

void eq2_suite() {
  double worst = 0.0;
  const double t = seconds([&] {
    for (const char* name : kBuiltins) {
      const StructureTriple s = triple(name);
      for (const auto& x : sample_points(s.metric(), kPoints, kSeed)) {
        const LocalGeometry<double> geo = local_geometry(s.metric(), x);
        const auto ctx = geo.context();
        const auto jet = hik_jet(s, geo);
        for (int mu = 0; mu < 4; ++mu) {
          const auto& u = jet.upsilon[mu];
          const auto& v = jet.value;
          const auto B = compute_B(ctx, v, u);
          worst = std::max({worst, rel(max_abs_coeff(covariant_D(ctx, B, u.H, v.H)), max_abs_coeff(u.H)),
                            rel(max_abs_coeff(covariant_D(ctx, B, u.I, v.I)), max_abs_coeff(u.I)),
                            rel(max_abs_coeff(covariant_D(ctx, B, u.K, v.K)), max_abs_coeff(u.K))});
        }
      }
    }
  });
  report(worst <= kTolEq2 && t <= kLimitEq2, "eq2 covariant constancy",
         fmt("max rel %.2e <= %.0e over 4x%.0fx4 cases; %.3f s <= 20 s", worst, kTolEq2, kPoints, t));
}

void eq1_suite() {
  double worst = 0.0, ratio_lo = 1e300, ratio_hi = -1e300;
  const double t = seconds([&] {
    for (const char* name : kCurved) {
      const StructureTriple s = triple(name);
      double fc = 0.0, cc = 0.0;
      for (const auto& x : sample_points(s.metric(), kPoints, kSeed)) {
        const FieldStrength fs = field_strength(s, x);
        const GeometryAtPoint geo = geometry_at(s.metric(), x);
        for (int m = 0; m < 4; ++m)
          for (int n = m + 1; n < 4; ++n) {
            const MultivectorD C = curvature_bivector(geo, m, n);
            worst = std::max(worst, rel(max_abs_coeff(fs.F[m][n] - C * 0.5), 0.5 * max_abs_coeff(C)));
            for (int a = 0; a < kBlades; ++a) {
              fc += fs.F[m][n].at(a) * C.at(a);
              cc += C.at(a) * C.at(a);
            }
          }
      }
      const double ratio = cc > 0 ? fc / cc : 0.0;
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
    }
  });
  const bool ok = worst <= kTolEq1 && ratio_lo >= kRatioLo && ratio_hi <= kRatioHi && t <= kLimitEq1;
  report(ok, "eq1 field strength = C/2",
         fmt("max rel %.2e <= %.0e; F:C ratio in [%.10f, %.10f]", worst, kTolEq1, ratio_lo, ratio_hi) +
             fmt("; %.3f s <= 30 s", t));
}

void proof_suite() {
  double worst = 0.0;
  for (const char* name : kBuiltins) {
    const StructureTriple s = triple(name);
    for (const auto& x : sample_points(s.metric(), kPoints, kSeed)) {
      const LocalGeometry<double> geo = local_geometry(s.metric(), x);
      const auto jet = hik_jet(s, geo);
      for (int mu = 0; mu < 4; ++mu)
        for (double r : proof_relation_residuals(geo.context(), jet.value, jet.upsilon[mu])) worst = std::max(worst, r);
    }
  }
  report(worst <= kTolProof, "proof relations", fmt("max %.2e <= %.0e", worst, kTolProof));
}

void flat_suite() {
  RunConfig c;
  c.metric = "minkowski";
  c.points = kPoints;
  c.seed = kSeed;
  const VerificationReport r = run_verification(c);
  double worst = 0.0;
  for (const auto& id : r.identities) worst = std::max(worst, id.max_residual);
  report(r.flat_connection && r.max_B == 0.0 && worst <= kTolFlat, "flat-space exactness",
         std::string("B = 0: ") + (r.flat_connection ? "yes" : "no") +
             fmt("; max residual %.2e <= %.0e", worst, kTolFlat));
}

void convention_anchor() {
  double worst = 0.0, flipped_min = 1e300;
  int fields = 0;
  for (const char* name : kBuiltins) {
    const StructureTriple s = triple(name);
    SplitMix64 rng(probe_seed(kSeed));
    int per_metric = 0;
    for (const auto& x : sample_points(s.metric(), 10, kSeed)) {
      const auto probes = sample_probes(rng, x, 2);
      worst = std::max(worst, check_point(s, x, probes).commutator);
      per_metric += 2;
      if (std::string(name) == "minkowski") continue;
      // The opposite sign of C must be rejected by the same comparison.
      const GeometryAtPoint geo = geometry_at(s.metric(), x);
      const auto ctx = CliffordContext<double>::from_metric(geo.g);
      const auto nn = second_covariant(s.metric(), probes[0], x);
      double diff = 0.0, scale = 0.0;
      for (int m = 0; m < 4; ++m)
        for (int n = m + 1; n < 4; ++n) {
          const MultivectorD wrong = commutator(ctx, curvature_bivector(geo, m, n) * -0.5, probes[0](x));
          diff = std::max(diff, max_abs_coeff(nn[m][n] - nn[n][m] - wrong));
          scale = std::max(scale, max_abs_coeff(wrong));
        }
      flipped_min = std::min(flipped_min, rel(diff, scale));
    }
    fields = std::min(fields == 0 ? per_metric : fields, per_metric);
  }
  report(worst <= kTolCommutator && fields >= 20 && flipped_min > 1e-3, "convention anchor [C/2, U]",
         fmt("max rel %.2e <= %.0e with %.0f fields per metric; flipped sign rejected (min rel %.2e)", worst,
             kTolCommutator, fields, flipped_min));
}

void cross_representation() {
  test::Random rng(kSeed);
  double worst = 0.0;
  for (int n = 0; n < 500; ++n) {
    const Mat4<double> g = rng.lorentzian_metric();
    const auto ctx = CliffordContext<double>::from_metric(g);
    const Tetrad<double> t = tetrad_from_metric(g);
    const auto a = MultivectorD::blade(Blade(static_cast<std::uint8_t>(rng.integer(0, 15))));
    const auto b = MultivectorD::blade(Blade(static_cast<std::uint8_t>(rng.integer(0, 15))));
    worst = std::max(worst, max_abs_coeff(clifford_mul(ctx, a, b) - frame_product(t, a, b)));
  }
  report(worst <= kTolCrossRep, "cross-representation product", fmt("max %.2e <= %.0e over 500 blade pairs", worst, kTolCrossRep));
}

void oracle_agreement() {
  double worst_gamma = 0.0, worst_riemann = 0.0;
  for (const char* name : kBuiltins) {
    const MetricSpec spec = builtin_metric(name);
    for (const auto& x : sample_points(spec, 50, kSeed + 1)) {
      const GeometryAtPoint geo = geometry_at(spec, x);
      const auto fg = test::fd_christoffel(spec, x);
      const auto fr = test::fd_riemann(spec, x);
      worst_gamma = std::max(worst_gamma, rel(test::max_abs_diff(geo.gamma, fg), test::max_abs_all(fg)));
      worst_riemann = std::max(worst_riemann, rel(test::max_abs_diff(geo.riemann_up, fr), test::max_abs_all(fr)));
    }
  }
  report(worst_gamma <= kTolOracle && worst_riemann <= kTolOracle, "dual vs finite differences",
         fmt("Christoffel rel %.2e, Riemann rel %.2e <= %.0e at 4x50 points", worst_gamma, worst_riemann, kTolOracle));
}

void frame_covariance() {
  SplitMix64 rng(kSeed ^ 0xABCDEF);
  bool ok = true;
  double eq1 = 0.0, eq2 = 0.0, eq3 = 0.0;
  for (int n = 0; n < 5; ++n) {
    const std::array<double, 3> axis{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const SpatialRotation R = SpatialRotation::axis_angle(axis, rng.uniform(0.1, 6.2));
    for (const char* name : kBuiltins) {
      RunConfig c;
      c.metric = name;
      c.points = kPoints;
      c.seed = kSeed + n;
      c.rotation = R;
      const VerificationReport r = run_verification(c);
      ok = ok && r.pass;
      eq1 = std::max(eq1, r.identity("eq1").max_residual);
      for (const char* id : {"eq2-H", "eq2-I", "eq2-K"}) eq2 = std::max(eq2, r.identity(id).max_residual);
      for (const char* id : {"eq3-H2", "eq3-I2", "eq3-K2", "eq3-HI", "eq3-HK", "eq3-IK"})
        eq3 = std::max(eq3, r.identity(id).max_residual);
    }
  }
  report(ok, "frame covariance", fmt("5 rotations x 4 metrics all pass; eq1 %.2e, eq2 %.2e, eq3 %.2e", eq1, eq2, eq3));
}

void full_run() {
  std::vector<std::string> first, second;
  const double t = seconds([&] {
    for (const char* name : kBuiltins) {
      RunConfig c;
      c.metric = name;
      c.points = kPoints;
      c.seed = kSeed;
      c.probes = 2;
      first.push_back(render(run_verification(c), ReportFormat::json));
    }
  });
  bool pass = true;
  for (const char* name : kBuiltins) {
    RunConfig c;
    c.metric = name;
    c.points = kPoints;
    c.seed = kSeed;
    const VerificationReport r = run_verification(c);
    pass = pass && r.pass;
    second.push_back(render(r, ReportFormat::json));
  }
  const bool same = first == second;
  report(pass && same && t <= kLimitFull, "full verify run",
         fmt("all builtins pass; %.3f s <= 60 s; byte-identical rerun: ", t) + (same ? "yes" : "no"));
}

}  // namespace

int main() {
  std::printf("kernel ISA: %s\n", kernels::isa_name(kernels::active_isa()));
  eq3_suite();
  eq2_suite();
  eq1_suite();
  proof_suite();
  flat_suite();
  convention_anchor();
  cross_representation();
  oracle_agreement();
  frame_covariance();
  full_run();
  std::printf("%s: %d failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
