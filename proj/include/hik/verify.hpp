#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hik/gauge.hpp"

namespace hik {

/// Configuration and validation failures (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64: state += 0x9E3779B97F4A7C15, then the standard mix.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// ((next() >> 11) + 0.5) · 2^-53, strictly inside (0, 1).
  double uniform();
  /// lo + (hi − lo) · uniform()
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Points drawn coordinate by coordinate, point by point, uniformly from the
/// sampling intervals of the metric.
std::vector<Point<double>> sample_points(const MetricSpec& spec, int count, std::uint64_t seed);

/// Random quadratic test fields around `center`; every coefficient is drawn
/// uniformly from (−1, 1).
std::vector<PolynomialField> sample_probes(SplitMix64& rng, const Point<double>& center, int count);

/// Seed of the probe stream derived from the run seed.
inline std::uint64_t probe_seed(std::uint64_t seed) { return seed ^ 0x5851F42D4C957F2DULL; }

struct Tolerances {
  double eq1 = 1e-6;
  double eq2 = 1e-8;
  double eq3 = 1e-10;
  double proof = 1e-9;
  double grade = 1e-10;
  double commutator = 1e-6;
  double ratio = 1e-4;
};

enum class ReportFormat { json, text };

struct RunConfig {
  std::string metric = "minkowski";
  std::map<std::string, double> params;
  int points = 100;
  std::uint64_t seed = 1;
  int probes = 2;  // random test fields per point for the commutator check
  Tolerances tol;
  std::optional<std::string> report_path;
  ReportFormat format = ReportFormat::json;
  bool timing = false;
  std::optional<SpatialRotation> rotation;

  /// Throws ConfigError.
  void validate() const;
};

struct IdentityResult {
  std::string id;
  std::string kind;  // "absolute" or "relative"
  double max_residual = 0.0;
  std::optional<Point<double>> worst_point;
  double tolerance = 0.0;
  bool pass = true;
};

struct VerificationReport {
  RunConfig config;
  std::string metric_name;
  std::array<std::string, 4> coordinates;
  std::map<std::string, double> parameters;
  std::vector<IdentityResult> identities;
  std::optional<double> best_fit_ratio;  // ⟨F,C⟩/⟨C,C⟩, absent for flat metrics
  std::map<std::string, int> tetrad_modes;
  bool flat_connection = true;
  double max_B = 0.0;
  double wall_time_s = 0.0;
  bool pass = true;

  const IdentityResult& identity(std::string_view id) const;
};

/// Identity ids in report order.
const std::vector<std::string>& identity_ids();

/// Sample, check every point, reduce by max (ties keep the earlier point).
/// Throws ConfigError for invalid config, signature violations, and
/// metric evaluation failures.
VerificationReport run_verification(const MetricSpec& spec, const RunConfig& config);

/// Resolve config.metric and run.
VerificationReport run_verification(const RunConfig& config);

nlohmann::ordered_json to_json(const VerificationReport& report);
std::string to_text(const VerificationReport& report);
std::string render(const VerificationReport& report, ReportFormat format);

/// "t=0,r=6,theta=1.0,phi=0.5" → point in declared coordinate order.
/// Throws expr::ParseError with the byte offset of the problem.
Point<double> parse_point_literal(std::string_view text, const MetricSpec& spec);

/// Full single-point dump: g, Γ, tetrad, H, I, K, B_μ, F_{μν}, ½C_{μν},
/// residuals. `pass` reports whether every residual meets its tolerance.
struct PointDump {
  nlohmann::ordered_json data;
  bool pass = true;
};

PointDump dump_point(const MetricSpec& spec, const Point<double>& x, const Tolerances& tol, std::uint64_t seed,
                     int probes);

/// One "path = value" line per leaf, in document order.
std::string flatten(const nlohmann::ordered_json& j);

nlohmann::ordered_json multivector_json(const MultivectorD& u);

}  // namespace hik
