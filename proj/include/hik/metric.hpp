#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hik/expr.hpp"
#include "hik/linalg.hpp"

namespace hik {

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Open interval (lo, hi) a coordinate may range over.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;
  bool contains(double x) const { return x > lo && x < hi; }
};

/// A metric on a single chart: four coordinate names, the lower triangle of
/// g_{μν} as expressions (absent = 0), validity domain per coordinate, and a
/// sampling margin trimmed from both ends of every interval.
class MetricSpec {
 public:
  MetricSpec(std::string name, std::array<std::string, 4> coordinates);

  const std::string& name() const { return name_; }
  const std::array<std::string, 4>& coordinates() const { return coords_; }
  const expr::Constants& parameters() const { return params_; }
  const std::array<Interval, 4>& domain() const { return domain_; }
  double margin() const { return margin_; }

  /// Parameters must be set before the components that reference them.
  void set_parameter(const std::string& name, double value);
  void set_domain(int coordinate, Interval interval);
  void set_margin(double margin);
  /// Parse and store g_{ij} (= g_{ji}). Throws expr::ParseError.
  void set_component(int i, int j, std::string_view text);

  const expr::Node* component(int i, int j) const;
  const std::string& component_text(int i, int j) const;
  bool is_diagonal() const;
  int coordinate_index(std::string_view name) const;

  /// Sampling interval for coordinate i (domain shrunk by the margin).
  Interval sampling_interval(int i) const;
  /// Strictly inside the validity domain.
  bool in_domain(const Point<double>& x) const;

  /// g_{μν} at x for any scalar realization.
  template <class T>
  Mat4<T> at(const Point<T>& x) const {
    Mat4<T> g = zero_mat<T>();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j <= i; ++j) {
        const auto& node = components_[slot(i, j)];
        if (!node) continue;
        g[i][j] = expr::eval<T>(*node, std::span<const T>(x.data(), 4));
        g[j][i] = g[i][j];
      }
    }
    return g;
  }

 private:
  static int slot(int i, int j) { return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i; }

  std::string name_;
  std::array<std::string, 4> coords_;
  expr::Constants params_;
  std::array<Interval, 4> domain_{};
  double margin_ = 0.0;
  std::array<std::optional<expr::Node>, 10> components_;
  std::array<std::string, 10> texts_;
};

/// Builtin catalog entry.
struct CatalogEntry {
  std::string name;
  std::map<std::string, double> default_parameters;
  std::string description;
};

/// Stable-ordered catalog of builtin metrics.
const std::vector<CatalogEntry>& catalog();

/// Builtin metric with parameter overrides; throws MetricError for unknown
/// names, unknown parameters, or invalid values.
MetricSpec builtin_metric(const std::string& name, const std::map<std::string, double>& params = {});

/// Parse the line-oriented metric file format:
///   # comment
///   coords: t r theta phi
///   param M: 1
///   domain r: (3, 30)
///   margin: 0.01
///   g 0 0: 1 - 2*M/r
/// Overrides replace `param` defaults. Throws MetricError (with line
/// number) or expr::ParseError.
MetricSpec parse_metric_file(std::string_view text, const std::string& name,
                             const std::map<std::string, double>& overrides = {});

MetricSpec load_metric_file(const std::string& path, const std::map<std::string, double>& overrides = {});

/// "minkowski", "schwarzschild", "file:path/to.metric" or a plain path.
MetricSpec resolve_metric(const std::string& selector, const std::map<std::string, double>& params = {});

/// Human-readable catalog listing, identical across runs.
std::string describe_catalog();

}  // namespace hik
