#include "hik/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hik {

using ojson = nlohmann::ordered_json;

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

std::vector<Point<double>> sample_points(const MetricSpec& spec, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Point<double>> points;
  points.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int p = 0; p < count; ++p) {
    Point<double> x;
    for (int i = 0; i < 4; ++i) {
      const Interval s = spec.sampling_interval(i);
      x[i] = rng.uniform(s.lo, s.hi);
    }
    points.push_back(x);
  }
  return points;
}

std::vector<PolynomialField> sample_probes(SplitMix64& rng, const Point<double>& center, int count) {
  std::vector<PolynomialField> out;
  for (int n = 0; n < count; ++n) {
    std::array<PolynomialField::Coefficient, kBlades> coeffs;
    for (auto& c : coeffs) {
      c.constant = rng.uniform(-1.0, 1.0);
      for (auto& l : c.linear) l = rng.uniform(-1.0, 1.0);
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) c.quadratic[i][j] = c.quadratic[j][i] = rng.uniform(-1.0, 1.0);
    }
    out.emplace_back(center, coeffs);
  }
  return out;
}

void RunConfig::validate() const {
  if (points < 1) throw ConfigError("point count must be at least 1");
  if (probes < 0) throw ConfigError("probe count must be non-negative");
  for (double t : {tol.eq1, tol.eq2, tol.eq3, tol.proof, tol.grade, tol.commutator, tol.ratio})
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tolerances must be positive and finite");
}

const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids = {
      "eq1",           "eq1-ratio",     "eq2-H",          "eq2-I",          "eq2-K",
      "eq3-H2",        "eq3-I2",        "eq3-K2",         "eq3-HI",         "eq3-HK",
      "eq3-IK",        "proof-HdH",     "proof-IdI",      "proof-KdK",      "proof-IK-mixed",
      "proof-HI-cross", "proof-HK-cross", "grade-purity", "commutator-consistency",
  };
  return ids;
}

const IdentityResult& VerificationReport::identity(std::string_view id) const {
  for (const auto& r : identities)
    if (r.id == id) return r;
  throw std::out_of_range("no identity '" + std::string(id) + "'");
}

namespace {

struct Accumulator {
  double max = 0.0;
  std::optional<Point<double>> worst;

  void add(double v, const Point<double>& x) {
    if (!worst || std::isnan(v) || (!std::isnan(max) && v > max)) {
      if (worst && std::isnan(max)) return;
      max = v;
      worst = x;
    }
  }
};

struct Spec {
  const char* kind;
  double Tolerances::*tol;
};

Spec spec_for(const std::string& id) {
  if (id == "eq1") return {"relative", &Tolerances::eq1};
  if (id == "eq1-ratio") return {"absolute", &Tolerances::ratio};
  if (id.rfind("eq2", 0) == 0) return {"relative", &Tolerances::eq2};
  if (id.rfind("eq3", 0) == 0) return {"absolute", &Tolerances::eq3};
  if (id.rfind("proof", 0) == 0) return {"absolute", &Tolerances::proof};
  if (id == "grade-purity") return {"absolute", &Tolerances::grade};
  return {"relative", &Tolerances::commutator};
}

std::string point_text(const Point<double>& x, const std::array<std::string, 4>& coords) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (int i = 0; i < 4; ++i) os << (i ? ", " : "") << coords[i] << "=" << x[i];
  return os.str();
}

ojson point_json(const Point<double>& x, const std::array<std::string, 4>& coords) {
  ojson j = ojson::object();
  for (int i = 0; i < 4; ++i) j[coords[i]] = x[i];
  return j;
}

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

VerificationReport run_verification(const MetricSpec& spec, const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  VerificationReport report;
  report.config = config;
  report.metric_name = spec.name();
  report.coordinates = spec.coordinates();
  for (const auto& [k, v] : spec.parameters()) report.parameters[k] = v;

  const TetradField field(spec, config.rotation.value_or(SpatialRotation{}));
  const StructureTriple triple{field};
  SplitMix64 probe_rng(probe_seed(config.seed));

  std::map<std::string, Accumulator> acc;
  double fc = 0.0, cc = 0.0;
  for (const auto& x : sample_points(spec, config.points, config.seed)) {
    PointCheck pc;
    try {
      check_signature(spec.at(x));
      report.tetrad_modes[mode_name(field.at(x).mode)] += 1;
      const auto probes = sample_probes(probe_rng, x, config.probes);
      pc = check_point(triple, x, probes);
    } catch (const ContextError& e) {
      throw ConfigError(std::string(e.what()) + " at " + point_text(x, spec.coordinates()));
    } catch (const expr::EvalError& e) {
      throw ConfigError(std::string("metric evaluation failed: ") + e.what() + " at " + point_text(x, spec.coordinates()));
    } catch (const GeometryError& e) {
      throw ConfigError(std::string(e.what()) + " at " + point_text(x, spec.coordinates()));
    }
    acc["eq1"].add(pc.eq1, x);
    acc["eq2-H"].add(pc.eq2[0], x);
    acc["eq2-I"].add(pc.eq2[1], x);
    acc["eq2-K"].add(pc.eq2[2], x);
    const char* eq3_ids[] = {"eq3-H2", "eq3-I2", "eq3-K2", "eq3-HI", "eq3-HK", "eq3-IK"};
    const char* proof_ids[] = {"proof-HdH", "proof-IdI", "proof-KdK", "proof-IK-mixed", "proof-HI-cross", "proof-HK-cross"};
    for (int k = 0; k < 6; ++k) {
      acc[eq3_ids[k]].add(pc.eq3[k], x);
      acc[proof_ids[k]].add(pc.proof[k], x);
    }
    acc["grade-purity"].add(pc.grade_purity, x);
    acc["commutator-consistency"].add(pc.commutator, x);
    fc += pc.fc;
    cc += pc.cc;
    report.flat_connection = report.flat_connection && pc.flat_b;
    report.max_B = std::max(report.max_B, pc.max_B);
  }
  if (cc > 0.0) report.best_fit_ratio = fc / cc;
  acc["eq1-ratio"].max = report.best_fit_ratio ? std::fabs(*report.best_fit_ratio - 0.5) : 0.0;

  for (const auto& id : identity_ids()) {
    const Spec s = spec_for(id);
    IdentityResult r;
    r.id = id;
    r.kind = s.kind;
    r.max_residual = acc[id].max;
    r.worst_point = acc[id].worst;
    r.tolerance = config.tol.*(s.tol);
    r.pass = r.max_residual <= r.tolerance;
    report.pass = report.pass && r.pass;
    report.identities.push_back(r);
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationReport run_verification(const RunConfig& config) {
  config.validate();
  MetricSpec spec = [&] {
    try {
      return resolve_metric(config.metric, config.params);
    } catch (const MetricError& e) {
      throw ConfigError(e.what());
    } catch (const expr::ParseError& e) {
      throw ConfigError(e.what());
    }
  }();
  return run_verification(spec, config);
}

ojson to_json(const VerificationReport& report) {
  const auto& c = report.config;
  ojson j;
  j["schema"] = 1;
  ojson cfg;
  cfg["metric"] = c.metric;
  cfg["params"] = ojson::object();
  for (const auto& [k, v] : c.params) cfg["params"][k] = v;
  cfg["points"] = c.points;
  cfg["seed"] = c.seed;
  cfg["probes_per_point"] = c.probes;
  cfg["tolerances"] = {{"eq1", c.tol.eq1},     {"eq2", c.tol.eq2},     {"eq3", c.tol.eq3},
                       {"proof", c.tol.proof}, {"grade", c.tol.grade}, {"commutator", c.tol.commutator},
                       {"ratio", c.tol.ratio}};
  if (c.rotation) {
    ojson rows = ojson::array();
    for (const auto& row : c.rotation->matrix()) rows.push_back(row);
    cfg["frame_rotation"] = rows;
  }
  j["config"] = cfg;

  ojson metric;
  metric["name"] = report.metric_name;
  metric["coordinates"] = report.coordinates;
  metric["parameters"] = ojson::object();
  for (const auto& [k, v] : report.parameters) metric["parameters"][k] = v;
  j["metric"] = metric;

  ojson ids = ojson::object();
  for (const auto& r : report.identities) {
    ojson e;
    e["kind"] = r.kind;
    e["max_residual"] = number(r.max_residual);
    e["tolerance"] = r.tolerance;
    e["pass"] = r.pass;
    e["worst_point"] = r.worst_point ? point_json(*r.worst_point, report.coordinates) : ojson(nullptr);
    ids[r.id] = e;
  }
  j["identities"] = ids;
  j["best_fit_ratio"] = report.best_fit_ratio ? number(*report.best_fit_ratio) : ojson(nullptr);
  j["connection"] = {{"flat", report.flat_connection}, {"max_abs_B", report.max_B}};
  ojson modes = ojson::object();
  for (const auto& [k, v] : report.tetrad_modes) modes[k] = v;
  j["tetrad_modes"] = modes;
  if (c.timing) j["wall_time_s"] = report.wall_time_s;
  j["pass"] = report.pass;
  return j;
}

std::string to_text(const VerificationReport& report) {
  std::ostringstream os;
  os << "metric: " << report.metric_name;
  if (!report.parameters.empty()) {
    os << " (";
    bool first = true;
    for (const auto& [k, v] : report.parameters) {
      os << (first ? "" : ", ") << k << "=" << v;
      first = false;
    }
    os << ")";
  }
  os << "\npoints: " << report.config.points << "  seed: " << report.config.seed << "\n";
  os << std::left << std::setw(24) << "identity" << std::setw(14) << "max_residual" << std::setw(12) << "tolerance"
     << std::setw(10) << "kind"
     << "result\n";
  for (const auto& r : report.identities) {
    std::ostringstream res, tol;
    res << std::setprecision(3) << std::scientific << r.max_residual;
    tol << std::setprecision(1) << std::scientific << r.tolerance;
    os << std::setw(24) << r.id << std::setw(14) << res.str() << std::setw(12) << tol.str() << std::setw(10) << r.kind
       << (r.pass ? "PASS" : "FAIL") << "\n";
  }
  os << "best-fit F:C ratio: ";
  if (report.best_fit_ratio)
    os << std::setprecision(10) << std::fixed << *report.best_fit_ratio << "\n";
  else
    os << "n/a (flat)\n";
  if (report.config.timing) os << "wall time: " << std::setprecision(3) << std::fixed << report.wall_time_s << " s\n";
  os << "result: " << (report.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render(const VerificationReport& report, ReportFormat format) {
  return format == ReportFormat::json ? to_json(report).dump(2) + "\n" : to_text(report);
}

Point<double> parse_point_literal(std::string_view text, const MetricSpec& spec) {
  std::array<bool, 4> seen{};
  Point<double> x{};
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  for (;;) {
    skip();
    const std::size_t name_start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
    if (pos == name_start) throw expr::ParseError(pos, "expected a coordinate name", "coordinate name");
    const std::string name(text.substr(name_start, pos - name_start));
    const int idx = spec.coordinate_index(name);
    if (idx < 0) throw expr::ParseError(name_start, "unknown coordinate '" + name + "'", "declared coordinate");
    if (seen[idx]) throw expr::ParseError(name_start, "coordinate '" + name + "' given twice", "each coordinate once");
    skip();
    if (pos >= text.size() || text[pos] != '=') throw expr::ParseError(pos, "missing '='", "'='");
    ++pos;
    skip();
    const std::size_t value_start = pos;
    while (pos < text.size() && text[pos] != ',') ++pos;
    std::string_view value = text.substr(value_start, pos - value_start);
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.remove_suffix(1);
    // Values are constant expressions (e.g. pi/2).
    const expr::Node node = expr::parse(value.empty() ? std::string_view(" ") : value, {}, spec.parameters());
    x[idx] = expr::eval<double>(node, std::span<const double>());
    seen[idx] = true;
    if (pos >= text.size()) break;
    ++pos;  // ','
  }
  for (int i = 0; i < 4; ++i)
    if (!seen[i]) throw expr::ParseError(text.size(), "missing coordinate '" + spec.coordinates()[i] + "'", "all four coordinates");
  return x;
}

ojson multivector_json(const MultivectorD& u) {
  ojson j = ojson::object();
  for (int a = 0; a < kBlades; ++a)
    if (u.at(a) != 0.0) j[Blade(static_cast<std::uint8_t>(a)).name()] = number(u.at(a));
  return j;
}

namespace {

ojson matrix_json(const Mat4<double>& m) {
  ojson rows = ojson::array();
  for (const auto& row : m) {
    ojson r = ojson::array();
    for (double v : row) r.push_back(number(v));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

PointDump dump_point(const MetricSpec& spec, const Point<double>& x, const Tolerances& tol, std::uint64_t seed, int probes) {
  if (!spec.in_domain(x)) throw GeometryError("point " + point_text(x, spec.coordinates()) + " is outside the domain");
  check_signature(spec.at(x));
  const auto& coords = spec.coordinates();
  const TetradField field(spec);
  const StructureTriple triple{field};
  const GeometryAtPoint geo = geometry_at(spec, x);
  const CliffordContext<double> ctx(geo.g, geo.ginv);
  const Tetrad<double> tetrad = field.at(x);
  const Hik<double> hik = hik_from_tetrad(ctx, tetrad);
  const FieldStrength fs = field_strength(triple, x);
  SplitMix64 rng(probe_seed(seed));
  const PointCheck pc = check_point(triple, x, sample_probes(rng, x, probes));

  ojson j;
  j["metric"] = spec.name();
  j["point"] = point_json(x, coords);
  j["g"] = matrix_json(geo.g);
  j["g_inverse"] = matrix_json(geo.ginv);
  ojson gamma = ojson::object();
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = m; n < 4; ++n)
        if (geo.gamma[l][m][n] != 0.0)
          gamma["Gamma^" + coords[l] + "_" + coords[m] + "," + coords[n]] = number(geo.gamma[l][m][n]);
  j["christoffel"] = gamma;
  j["tetrad"] = {{"mode", mode_name(tetrad.mode)}, {"coframe", matrix_json(tetrad.coframe)}};
  j["H"] = multivector_json(hik.H);
  j["I"] = multivector_json(hik.I);
  j["K"] = multivector_json(hik.K);
  ojson B = ojson::object();
  for (int m = 0; m < 4; ++m) B["B_" + coords[m]] = multivector_json(fs.B[m]);
  j["B"] = B;
  ojson F = ojson::object(), C = ojson::object();
  for (int m = 0; m < 4; ++m)
    for (int n = m + 1; n < 4; ++n) {
      const std::string key = coords[m] + "," + coords[n];
      F["F_" + key] = multivector_json(fs.F[m][n]);
      C["halfC_" + key] = multivector_json(curvature_bivector(geo, m, n) * 0.5);
    }
  j["F"] = F;
  j["half_C"] = C;

  ojson res = ojson::object();
  bool pass = true;
  auto put = [&](const std::string& id, double v, double t) {
    res[id] = {{"residual", number(v)}, {"tolerance", t}, {"pass", v <= t}};
    pass = pass && v <= t;
  };
  put("eq1", pc.eq1, tol.eq1);
  put("eq2-H", pc.eq2[0], tol.eq2);
  put("eq2-I", pc.eq2[1], tol.eq2);
  put("eq2-K", pc.eq2[2], tol.eq2);
  const char* eq3_ids[] = {"eq3-H2", "eq3-I2", "eq3-K2", "eq3-HI", "eq3-HK", "eq3-IK"};
  const char* proof_ids[] = {"proof-HdH", "proof-IdI", "proof-KdK", "proof-IK-mixed", "proof-HI-cross", "proof-HK-cross"};
  for (int k = 0; k < 6; ++k) put(eq3_ids[k], pc.eq3[k], tol.eq3);
  for (int k = 0; k < 6; ++k) put(proof_ids[k], pc.proof[k], tol.proof);
  put("grade-purity", pc.grade_purity, tol.grade);
  put("commutator-consistency", pc.commutator, tol.commutator);
  j["residuals"] = res;
  j["pass"] = pass;
  return {j, pass};
}

namespace {

void flatten_into(const ojson& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    if (j.empty()) os << path << " = {}\n";
    for (auto it = j.begin(); it != j.end(); ++it) flatten_into(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], path + "[" + std::to_string(i) + "]", os);
  } else {
    os << path << " = " << j.dump() << "\n";
  }
}

}  // namespace

std::string flatten(const ojson& j) {
  std::ostringstream os;
  flatten_into(j, "", os);
  return os.str();
}

}  // namespace hik
