// hikverify: verification front end.
//
// Exit codes: 0 all identities pass, 1 at least one identity fails (the
// report is still written), 2 configuration, parse, signature or domain error.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>

#include "hik/kernels.hpp"
#include "hik/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw hik::ConfigError("--param expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty())
      throw hik::ConfigError("--param " + name + ": '" + text + "' is not a number");
    if (out.count(name)) throw hik::ConfigError("--param " + name + " given twice");
    out[name] = value;
  }
  return out;
}

bool write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return true;
  }
  std::ofstream out(*path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write report to " << *path << "\n";
    return false;
  }
  return true;
}

struct Options {
  std::string metric = "minkowski";
  std::vector<std::string> params;
  int points = 100;
  std::uint64_t seed = 1;
  int probes = 2;
  hik::Tolerances tol;
  std::string report;
  std::string format = "json";
  bool timing = false;
  std::string point;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--metric", o.metric, "builtin name, file:PATH, or a metric file path");
  cmd->add_option("--param", o.params, "metric parameter NAME=VALUE (repeatable)")->take_all();
  cmd->add_option("--seed", o.seed, "PRNG seed");
  cmd->add_option("--probes", o.probes, "random test fields per point for the commutator check");
  cmd->add_option("--tol-eq1", o.tol.eq1, "field-strength tolerance (relative)");
  cmd->add_option("--tol-eq2", o.tol.eq2, "covariant-constancy tolerance (relative)");
  cmd->add_option("--tol-eq3", o.tol.eq3, "algebraic-relation tolerance (absolute)");
  cmd->add_option("--tol-proof", o.tol.proof, "auxiliary-relation tolerance (absolute)");
  cmd->add_option("--report", o.report, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
}

hik::RunConfig to_config(const Options& o) {
  hik::RunConfig c;
  c.metric = o.metric;
  c.params = parse_params(o.params);
  c.points = o.points;
  c.seed = o.seed;
  c.probes = o.probes;
  c.tol = o.tol;
  if (!o.report.empty()) c.report_path = o.report;
  c.format = o.format == "text" ? hik::ReportFormat::text : hik::ReportFormat::json;
  c.timing = o.timing;
  return c;
}

int cmd_verify(const Options& o) {
  const hik::RunConfig config = to_config(o);
  const hik::VerificationReport report = hik::run_verification(config);
  if (!write_output(config.report_path, hik::render(report, config.format))) return kExitConfig;
  if (!report.pass) {
    for (const auto& r : report.identities)
      if (!r.pass) std::cerr << "FAIL " << r.id << ": " << r.max_residual << " > " << r.tolerance << "\n";
    return kExitFail;
  }
  return 0;
}

int cmd_check_point(const Options& o) {
  const hik::RunConfig config = to_config(o);
  config.validate();
  const hik::MetricSpec spec = hik::resolve_metric(config.metric, config.params);
  const hik::Point<double> x = hik::parse_point_literal(o.point, spec);
  const hik::PointDump dump = hik::dump_point(spec, x, config.tol, config.seed, config.probes);
  const std::string text =
      config.format == hik::ReportFormat::json ? dump.data.dump(2) + "\n" : hik::flatten(dump.data);
  if (!write_output(config.report_path, text)) return kExitConfig;
  return dump.pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-field verification over pseudo-Riemannian metrics"};
  app.require_subcommand(1);
  bool show_isa = false;
  app.add_flag("--show-isa", show_isa, "print the selected kernel ISA on stderr");

  Options o;
  auto* verify = app.add_subcommand("verify", "sample points and check every identity");
  add_common(verify, o);
  verify->add_option("--points", o.points, "number of sampled points");
  verify->add_flag("--timing", o.timing, "include wall time in the report");

  auto* check = app.add_subcommand("check-point", "full dump at one chart point");
  add_common(check, o);
  check->add_option("--point", o.point, "e.g. t=0,r=6,theta=1.0,phi=0.5")->required();

  app.add_subcommand("metrics", "list the builtin catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (show_isa) std::cerr << "isa: " << hik::kernels::isa_name(hik::kernels::active_isa()) << "\n";

  try {
    if (*verify) return cmd_verify(o);
    if (*check) return cmd_check_point(o);
    std::cout << hik::describe_catalog();
    return 0;
  } catch (const hik::expr::ParseError& e) {
    std::cerr << "parse error at offset " << e.offset() << ": " << e.message();
    if (!e.expected().empty()) std::cerr << " (expected " << e.expected() << ")";
    std::cerr << "\n";
  } catch (const hik::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const hik::MetricError& e) {
    std::cerr << "metric error: " << e.what() << "\n";
  } catch (const hik::ContextError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const hik::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const hik::expr::EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
  } catch (const hik::SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitConfig;
}
