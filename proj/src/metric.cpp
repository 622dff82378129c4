#include "hik/metric.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hik {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kThetaMargin = 0.2;

}  // namespace

MetricSpec::MetricSpec(std::string name, std::array<std::string, 4> coordinates)
    : name_(std::move(name)), coords_(std::move(coordinates)) {
  for (int i = 0; i < 4; ++i) {
    if (coords_[i].empty()) throw MetricError("coordinate " + std::to_string(i) + " has no name");
    for (int j = 0; j < i; ++j)
      if (coords_[i] == coords_[j]) throw MetricError("duplicate coordinate name '" + coords_[i] + "'");
  }
}

void MetricSpec::set_parameter(const std::string& name, double value) {
  if (!std::isfinite(value)) throw MetricError("parameter " + name + " must be finite");
  params_[name] = value;
}

void MetricSpec::set_domain(int coordinate, Interval interval) {
  if (!(interval.lo < interval.hi))
    throw MetricError("empty domain for coordinate '" + coords_.at(coordinate) + "'");
  domain_.at(coordinate) = interval;
}

void MetricSpec::set_margin(double margin) {
  if (!(margin >= 0.0)) throw MetricError("margin must be non-negative");
  margin_ = margin;
}

void MetricSpec::set_component(int i, int j, std::string_view text) {
  if (i < 0 || i > 3 || j < 0 || j > 3) throw MetricError("component index out of range");
  const auto node = expr::parse(text, std::span<const std::string>(coords_.data(), 4), params_);
  components_[slot(i, j)] = node;
  texts_[slot(i, j)] = std::string(trim(text));
}

const expr::Node* MetricSpec::component(int i, int j) const {
  const auto& c = components_[slot(i, j)];
  return c ? &*c : nullptr;
}

const std::string& MetricSpec::component_text(int i, int j) const { return texts_[slot(i, j)]; }

bool MetricSpec::is_diagonal() const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j)
      if (components_[slot(i, j)]) return false;
  return true;
}

int MetricSpec::coordinate_index(std::string_view name) const {
  for (int i = 0; i < 4; ++i)
    if (coords_[i] == name) return i;
  return -1;
}

Interval MetricSpec::sampling_interval(int i) const {
  return {domain_[i].lo + margin_, domain_[i].hi - margin_};
}

bool MetricSpec::in_domain(const Point<double>& x) const {
  for (int i = 0; i < 4; ++i)
    if (!domain_[i].contains(x[i])) return false;
  return true;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"minkowski", {}, "flat space, diag(1,-1,-1,-1)"},
      {"schwarzschild", {{"M", 1.0}}, "exterior Schwarzschild, horizon at r = 2M"},
      {"flrw-exp", {}, "exponentially expanding FLRW, diag(1,-e^{2t},-e^{2t},-e^{2t})"},
      {"de-sitter", {{"lambda", 1.0}}, "static de Sitter patch, horizon at r = sqrt(3/lambda)"},
  };
  return entries;
}

MetricSpec builtin_metric(const std::string& name, const std::map<std::string, double>& params) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog())
    if (e.name == name) entry = &e;
  if (!entry) throw MetricError("unknown builtin metric '" + name + "'");
  std::map<std::string, double> values = entry->default_parameters;
  for (const auto& [k, v] : params) {
    if (!values.count(k)) throw MetricError("metric '" + name + "' has no parameter '" + k + "'");
    values[k] = v;
  }

  if (name == "minkowski") {
    MetricSpec spec(name, {"t", "x", "y", "z"});
    for (int i = 0; i < 4; ++i) spec.set_domain(i, {-5.0, 5.0});
    spec.set_component(0, 0, "1");
    for (int i = 1; i < 4; ++i) spec.set_component(i, i, "-1");
    return spec;
  }
  if (name == "flrw-exp") {
    MetricSpec spec(name, {"t", "x", "y", "z"});
    for (int i = 0; i < 4; ++i) spec.set_domain(i, {-1.0, 1.0});
    spec.set_component(0, 0, "1");
    for (int i = 1; i < 4; ++i) spec.set_component(i, i, "-exp(2*t)");
    return spec;
  }
  if (name == "schwarzschild") {
    const double m = values.at("M");
    if (!(m > 0.0)) throw MetricError("schwarzschild requires M > 0");
    MetricSpec spec(name, {"t", "r", "theta", "phi"});
    spec.set_parameter("M", m);
    // Horizon 2M plus a 50% margin.
    spec.set_domain(0, {-10.0, 10.0});
    spec.set_domain(1, {3.0 * m, 30.0 * m});
    spec.set_domain(2, {kThetaMargin, kPi - kThetaMargin});
    spec.set_domain(3, {0.0, 2.0 * kPi});
    spec.set_component(0, 0, "1 - 2*M/r");
    spec.set_component(1, 1, "-1/(1 - 2*M/r)");
    spec.set_component(2, 2, "-r^2");
    spec.set_component(3, 3, "-r^2*sin(theta)^2");
    return spec;
  }
  // de-sitter
  const double lambda = values.at("lambda");
  if (!(lambda > 0.0)) throw MetricError("de-sitter requires lambda > 0");
  const double horizon = std::sqrt(3.0 / lambda);
  MetricSpec spec(name, {"t", "r", "theta", "phi"});
  spec.set_parameter("lambda", lambda);
  spec.set_domain(0, {-10.0, 10.0});
  spec.set_domain(1, {0.25 * horizon, 0.75 * horizon});
  spec.set_domain(2, {kThetaMargin, kPi - kThetaMargin});
  spec.set_domain(3, {0.0, 2.0 * kPi});
  spec.set_component(0, 0, "1 - lambda*r^2/3");
  spec.set_component(1, 1, "-1/(1 - lambda*r^2/3)");
  spec.set_component(2, 2, "-r^2");
  spec.set_component(3, 3, "-r^2*sin(theta)^2");
  return spec;
}

MetricSpec parse_metric_file(std::string_view text, const std::string& name,
                             const std::map<std::string, double>& overrides) {
  struct Line {
    int number;
    std::string key;
    std::string value;
  };
  std::vector<Line> lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    start = end + 1;
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw MetricError(name + ":" + std::to_string(number) + ": expected 'key: value'");
    lines.push_back({number, std::string(trim(line.substr(0, colon))), std::string(trim(line.substr(colon + 1)))});
  }

  auto where = [&](const Line& l) { return name + ":" + std::to_string(l.number) + ": "; };

  std::optional<MetricSpec> spec;
  for (const auto& l : lines) {
    if (l.key != "coords") continue;
    if (spec) throw MetricError(where(l) + "duplicate coords line");
    const auto words = split_words(l.value);
    if (words.size() != 4) throw MetricError(where(l) + "coords needs exactly 4 names");
    spec.emplace(name, std::array<std::string, 4>{words[0], words[1], words[2], words[3]});
  }
  if (!spec) throw MetricError(name + ": missing 'coords:' line");

  std::map<std::string, double> declared;
  for (const auto& l : lines) {
    const auto words = split_words(l.key);
    if (words.empty() || words[0] != "param") continue;
    if (words.size() != 2) throw MetricError(where(l) + "expected 'param NAME: value'");
    const auto v = to_double(l.value);
    if (!v) throw MetricError(where(l) + "parameter value is not a number");
    if (spec->coordinate_index(words[1]) >= 0)
      throw MetricError(where(l) + "parameter '" + words[1] + "' shadows a coordinate");
    if (!declared.emplace(words[1], *v).second) throw MetricError(where(l) + "duplicate parameter '" + words[1] + "'");
  }
  for (const auto& [k, v] : overrides) {
    if (!declared.count(k)) throw MetricError(name + ": metric has no parameter '" + k + "'");
    declared[k] = v;
  }
  for (const auto& [k, v] : declared) spec->set_parameter(k, v);

  std::array<bool, 16> seen{};
  bool any_component = false;
  for (const auto& l : lines) {
    const auto words = split_words(l.key);
    if (l.key == "coords" || words.empty() || words[0] == "param") continue;
    if (words[0] == "margin" && words.size() == 1) {
      const auto v = to_double(l.value);
      if (!v) throw MetricError(where(l) + "margin is not a number");
      try {
        spec->set_margin(*v);
      } catch (const MetricError& e) {
        throw MetricError(where(l) + e.what());
      }
    } else if (words[0] == "domain" && words.size() == 2) {
      const int idx = spec->coordinate_index(words[1]);
      if (idx < 0) throw MetricError(where(l) + "unknown coordinate '" + words[1] + "'");
      std::string_view v = l.value;
      if (v.size() < 2 || v.front() != '(' || v.back() != ')')
        throw MetricError(where(l) + "domain must be written '(lo, hi)'");
      v = v.substr(1, v.size() - 2);
      const auto comma = v.find(',');
      if (comma == std::string_view::npos) throw MetricError(where(l) + "domain must be written '(lo, hi)'");
      const auto lo = to_double(v.substr(0, comma));
      const auto hi = to_double(v.substr(comma + 1));
      if (!lo || !hi) throw MetricError(where(l) + "domain bounds must be numbers");
      try {
        spec->set_domain(idx, {*lo, *hi});
      } catch (const MetricError& e) {
        throw MetricError(where(l) + e.what());
      }
    } else if (words[0] == "g" && words.size() == 3) {
      auto index_of = [&](const std::string& w) {
        if (w.size() == 1 && w[0] >= '0' && w[0] <= '3') return w[0] - '0';
        const int idx = spec->coordinate_index(w);
        if (idx < 0) throw MetricError(where(l) + "bad component index '" + w + "'");
        return idx;
      };
      const int i = index_of(words[1]);
      const int j = index_of(words[2]);
      const int key = std::min(i, j) * 4 + std::max(i, j);
      if (seen[key]) throw MetricError(where(l) + "component g " + std::to_string(i) + " " + std::to_string(j) + " given twice");
      seen[key] = true;
      if (trim(l.value).empty()) throw MetricError(where(l) + "empty component expression");
      spec->set_component(i, j, l.value);
      any_component = true;
    } else {
      throw MetricError(where(l) + "unknown key '" + l.key + "'");
    }
  }
  if (!any_component) throw MetricError(name + ": no metric components given");
  for (int i = 0; i < 4; ++i) {
    const Interval s = spec->sampling_interval(i);
    if (!(s.lo < s.hi)) throw MetricError(name + ": margin leaves an empty sampling interval for '" + spec->coordinates()[i] + "'");
  }
  return *spec;
}

MetricSpec load_metric_file(const std::string& path, const std::map<std::string, double>& overrides) {
  std::ifstream in(path);
  if (!in) throw MetricError("cannot open metric file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric_file(buf.str(), "file:" + path, overrides);
}

MetricSpec resolve_metric(const std::string& selector, const std::map<std::string, double>& params) {
  if (selector.rfind("file:", 0) == 0) return load_metric_file(selector.substr(5), params);
  for (const auto& e : catalog())
    if (e.name == selector) return builtin_metric(selector, params);
  if (selector.find('/') != std::string::npos || selector.find('.') != std::string::npos)
    return load_metric_file(selector, params);
  throw MetricError("unknown metric '" + selector + "' (builtins: minkowski, schwarzschild, flrw-exp, de-sitter; or file:PATH)");
}

std::string describe_catalog() {
  std::ostringstream os;
  for (const auto& entry : catalog()) {
    const MetricSpec spec = builtin_metric(entry.name);
    os << entry.name << "\n";
    os << "  description: " << entry.description << "\n";
    os << "  parameters:";
    if (entry.default_parameters.empty()) os << " none";
    for (const auto& [k, v] : entry.default_parameters) os << " " << k << "=" << format(v);
    os << "\n";
    if (entry.name == "schwarzschild") os << "  domain rule: r > 3M (horizon 2M plus 50% margin), r < 30M, theta in [0.2, pi-0.2]\n";
    if (entry.name == "de-sitter")
      os << "  domain rule: r in (0.25, 0.75)*sqrt(3/lambda), theta in [0.2, pi-0.2]\n";
    os << "  domain at defaults:";
    for (int i = 0; i < 4; ++i)
      os << " " << spec.coordinates()[i] << " in (" << format(spec.domain()[i].lo) << ", " << format(spec.domain()[i].hi) << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace hik
