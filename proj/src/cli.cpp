#include "taubnut/cli.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "taubnut/analytic.hpp"
#include "taubnut/curvature.hpp"
#include "taubnut/io.hpp"
#include "taubnut/verify.hpp"

namespace taubnut::cli {

namespace {

// Reads a flat JSON object as option values for the selected subcommand:
// {"n": 1, "init": [0, 1.57, ...], "t-end": 10}. CLI11 only reads the config
// file of the top-level app, so each item is routed to the subcommand here.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("config file is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    const auto selected = app_->get_subcommands();
    if (selected.empty()) throw ConfigError("--config needs a subcommand");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.parents = {selected.front()->get_name()};
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    throw ConfigError(fmt::format("config key '{}' must hold scalars or a flat array", key));
  }

  const CLI::App* app_;
};

// Writes through `out` unless a path was given.
class Sink {
 public:
  Sink(std::ostream& fallback, const std::string& path) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

void report_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << "error=" << kind << " message=\"" << escape(message) << "\"\n";
}

Point point_from(const std::vector<double>& x) {
  return Point::from_array({x[0], x[1], x[2], x[3]});
}

struct IntegrateArgs {
  double n = 1.0;
  std::vector<double> init;
  double t_end = 10.0;
  double tol = 1e-12;
  std::size_t samples = 0;
  std::string out;
};

int cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  ModelParams params;
  params.n = a.n;
  params.validate();
  IntegrationConfig cfg;
  cfg.abs_tol = cfg.rel_tol = a.tol;
  cfg.t_end = a.t_end;
  if (a.samples == 1) throw ConfigError("--samples needs 0 (every step) or at least 2 points");
  for (std::size_t i = 0; i < a.samples; ++i) {
    cfg.sample_grid.push_back(i + 1 == a.samples
                                  ? a.t_end
                                  : a.t_end * static_cast<double>(i) /
                                        static_cast<double>(a.samples - 1));
  }
  cfg.validate();
  PhaseState s0;
  s0.point = point_from(a.init);
  s0.velocity = {a.init[4], a.init[5], a.init[6], a.init[7]};

  const Trajectory traj = integrate(params, s0, cfg);
  Sink sink(out, a.out);
  write_trajectory_csv(sink.get(), traj);
  return traj.termination == Termination::Horizon ? kExitOk : kExitEarlyTermination;
}

struct AnalyticArgs {
  std::string family;
  std::string mode;
  double n = 1.0;
  int eps = 1;
  double r1 = 1.0;
  double angular = 0.0;
  double theta_const = 0.0;
  double t1 = 0.0;
  double tau1 = 0.0;
  double phi1 = 0.0;
  double theta1 = 0.0;
  std::string r_range;
  std::size_t samples = 10;
  std::string out;
  // Names of the constants present on the command line or in the config.
  std::set<std::string> given;
};

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--r-range must look like a:b");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string sa = text.substr(0, colon), sb = text.substr(colon + 1);
    const double a = std::stod(sa, &used_a);
    const double b = std::stod(sb, &used_b);
    if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(text);
    if (!(a > 0.0) || !(b >= a)) throw ConfigError("--r-range needs 0 < a <= b");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("--r-range '{}' is not a:b", text));
  }
}

int cmd_analytic(const AnalyticArgs& a, std::ostream& out) {
  ModelParams params;
  params.n = a.n;
  params.validate();
  FamilyConstants c;
  c.family = family_from_tag(a.family);
  if (c.family == Family::StationaryPoint || c.family == Family::Generic) {
    throw ConfigError(fmt::format("family {} has no closed form", a.family));
  }
  const CurveMode mode = a.mode.empty() ? natural_mode(c.family) : mode_from_name(a.mode);

  std::set<std::string> allowed = {"eps", "r1", "t1"};
  std::string angular_flag;
  std::vector<std::string> anchors;
  switch (c.family) {
    case Family::TauRadial: angular_flag = "tau0"; anchors = {"tau1"}; break;
    case Family::Equatorial: angular_flag = "phi0"; anchors = {"phi1"}; break;
    case Family::Meridional: angular_flag = "theta0"; anchors = {"theta1"}; break;
    case Family::ConstTheta:
      angular_flag = "phi0";
      anchors = {"tau1", "phi1"};
      allowed.insert("theta-const");
      break;
    default: break;
  }
  if (!angular_flag.empty()) allowed.insert(angular_flag);
  allowed.insert(anchors.begin(), anchors.end());
  for (const std::string& name : a.given) {
    if (!allowed.count(name)) {
      throw ConfigError(fmt::format("--{} is not a constant of {}", name, a.family));
    }
  }
  if (!a.given.count("r1")) throw ConfigError(fmt::format("{} needs --r1", a.family));
  if (!angular_flag.empty() && !a.given.count(angular_flag)) {
    throw ConfigError(fmt::format("{} needs --{}", a.family, angular_flag));
  }
  if (c.family == Family::ConstTheta && !a.given.count("theta-const")) {
    throw ConfigError("thm5 needs --theta-const");
  }
  c.eps = a.eps;
  c.r1 = a.r1;
  c.angular = a.angular;
  if (c.family == Family::ConstTheta) c.theta_const = a.theta_const;
  c.t1 = a.t1;
  c.tau1 = a.tau1;
  c.phi1 = a.phi1;
  c.theta1 = a.theta1;
  c.validate();
  if (mode == CurveMode::Corrected && c.family != Family::ConstTheta) {
    throw ConfigError("--mode corrected applies to thm5 only");
  }

  const auto [lo, hi] = parse_range(a.r_range);
  if (a.samples < 1 || (a.samples == 1 && lo != hi)) {
    throw ConfigError("--samples must be at least 2 for a non-degenerate range");
  }
  const double R = turning_radius(c, params).value;

  std::vector<std::string> columns = {"r", "t"};
  switch (c.family) {
    case Family::TauRadial: columns.push_back("tau"); break;
    case Family::Equatorial: columns.push_back("phi"); break;
    case Family::Meridional: columns.push_back("theta"); break;
    case Family::ConstTheta: columns.insert(columns.end(), {"phi", "tau"}); break;
    default: break;
  }

  std::vector<std::string> rows;
  std::vector<std::string> notes;
  for (std::size_t i = 0; i < a.samples; ++i) {
    const double u = a.samples == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(a.samples - 1);
    const double r = i + 1 == a.samples ? hi : lo * std::pow(hi / lo, u);
    const FamilyPoint p = evaluate_family(params, c, r, mode);
    std::string row = format_double(r) + "," + format_double(p.t);
    if (c.family == Family::TauRadial) row += "," + format_double(*p.tau);
    if (c.family == Family::Equatorial) row += "," + format_double(*p.phi);
    if (c.family == Family::Meridional) row += "," + format_double(*p.theta);
    if (c.family == Family::ConstTheta) {
      row += "," + format_double(*p.phi) + "," + format_double(*p.tau);
    }
    rows.push_back(std::move(row));
    if (r == R && (c.family == Family::Equatorial || c.family == Family::Meridional)) {
      notes.push_back(fmt::format("# turning_point_limit r={}", format_double(r)));
    }
  }
  if (c.family == Family::Meridional &&
      thm4_curves(params, c, hi, mode).exits_range) {
    notes.push_back("# exits_range theta leaves (0, pi) on [R, inf)");
  }

  Sink sink(out, a.out);
  std::ostream& o = sink.get();
  o << fmt::format("# family={} mode={} n={} R={}\n", a.family, mode_name(mode),
                   format_double(a.n), format_double(R));
  o << "# constants " << family_to_json(c, a.n).dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) o << (i ? "," : "") << columns[i];
  o << '\n';
  for (const std::string& row : rows) o << row << '\n';
  for (const std::string& note : notes) o << note << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& scenario, std::uint64_t seed, const std::string& path,
               std::ostream& out) {
  const std::vector<VerificationReport> reports = run_scenario(scenario, seed);
  const nlohmann::ordered_json doc = verification_document(scenario, seed, reports);
  Sink sink(out, path);
  sink.get() << doc.dump(2) << '\n';
  return doc["pass"].get<bool>() ? kExitOk : kExitVerification;
}

int cmd_christoffel(double n, const std::vector<double>& at, std::ostream& out) {
  ModelParams params;
  params.n = n;
  params.validate();
  const Point p = point_from(at);
  const ChristoffelTable exact = christoffel_at(params, p);
  const ChristoffelTable oracle = christoffel_fd_oracle(params, p);

  nlohmann::ordered_json j;
  j["n"] = n;
  j["point"] = at;
  auto& entries = j["entries"] = nlohmann::ordered_json::array();
  for (const ChristoffelIndex& idx : kChristoffelNonzero) {
    nlohmann::ordered_json e;
    e["symbol"] = fmt::format("Gamma^{}_{{{} {}}}", coord::kNames[idx.upper],
                              coord::kNames[idx.lower_a], coord::kNames[idx.lower_b]);
    e["index"] = {idx.upper, idx.lower_a, idx.lower_b};
    e["closed_form"] = exact(idx.upper, idx.lower_a, idx.lower_b);
    e["fd_oracle"] = oracle(idx.upper, idx.lower_a, idx.lower_b);
    entries.push_back(std::move(e));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t c = 0; c < 4; ++c) {
        worst = std::max(worst, std::abs(exact(a, b, c) - oracle(a, b, c)));
      }
    }
  }
  j["max_abs_difference"] = worst;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_curvature(double n, const std::vector<double>& at, std::ostream& out) {
  ModelParams params;
  params.n = n;
  params.validate();
  const Point p = point_from(at);
  require_off_axis(params, p);
  const DualityProjection d = duality_projection(params, p);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["point"] = at;
  j["ricci_max_abs"] = max_abs(ricci_fd(params, p));
  j["riemann_max_abs"] = d.riemann_max;
  j["orientation"] = kFrameOrientation;
  j["self_dual_residual"] = d.self_dual;
  j["anti_self_dual_residual"] = d.anti_self_dual;
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-dual Taub-NUT geodesics: integration, closed forms and verification",
               "taubnut"};
  app.require_subcommand(1);
  // Subcommands pass --config up to the top-level app.
  app.fallthrough();
  app.set_config("--config", "", "JSON file with option values; flags override it");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(false);

  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "Integrate the geodesic system to CSV");
  integ->add_option("--n", ia.n, "NUT parameter")->required();
  integ->add_option("--init", ia.init, "tau,theta,phi,r,dtau,dtheta,dphi,dr")
      ->required()
      ->delimiter(',')
      ->expected(8);
  integ->add_option("--t-end", ia.t_end, "Final affine parameter")->required();
  integ->add_option("--tol", ia.tol, "Absolute and relative tolerance");
  integ->add_option("--samples", ia.samples, "Uniform output grid size (0: every step)");
  integ->add_option("--out", ia.out, "Output file (default: stdout)");

  AnalyticArgs aa;
  auto* ana = app.add_subcommand("analytic", "Tabulate a closed-form family");
  ana->add_option("--family", aa.family, "thm1..thm5")->required();
  ana->add_option("--mode", aa.mode, "literal, aligned or corrected");
  ana->add_option("--n", aa.n, "NUT parameter")->required();
  ana->add_option("--r-range", aa.r_range, "a:b")->required();
  ana->add_option("--samples", aa.samples, "Log-uniform rows on the range");
  ana->add_option("--out", aa.out, "Output file (default: stdout)");
  std::vector<std::pair<std::string, CLI::Option*>> constants = {
      {"eps", ana->add_option("--eps", aa.eps, "+1 outgoing, -1 incoming")},
      {"r1", ana->add_option("--r1", aa.r1)},
      {"tau0", ana->add_option("--tau0", aa.angular)},
      {"phi0", ana->add_option("--phi0", aa.angular)},
      {"theta0", ana->add_option("--theta0", aa.angular)},
      {"theta-const", ana->add_option("--theta-const", aa.theta_const)},
      {"t1", ana->add_option("--t1", aa.t1)},
      {"tau1", ana->add_option("--tau1", aa.tau1)},
      {"phi1", ana->add_option("--phi1", aa.phi1)},
      {"theta1", ana->add_option("--theta1", aa.theta1)},
  };

  std::string scenario = "all";
  std::uint64_t seed = kDefaultSeed;
  std::string verify_out;
  auto* ver = app.add_subcommand("verify", "Run verification scenarios, JSON report");
  ver->add_option("--scenario", scenario, "thm1..thm5, curvature or all");
  ver->add_option("--seed", seed, "Seed for parameter draws");
  ver->add_option("--out", verify_out, "Output file (default: stdout)");

  double tensor_n = 1.0;
  std::vector<double> tensor_point;
  auto add_tensor = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--n", tensor_n, "NUT parameter")->required();
    sub->add_option("--point", tensor_point, "tau,theta,phi,r")
        ->required()
        ->delimiter(',')
        ->expected(4);
    return sub;
  };
  auto* chr = add_tensor("christoffel", "Closed-form and finite-difference Christoffel symbols");
  auto* cur = add_tensor("curvature", "Ricci and duality residuals at a point");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e, out, err);
      report_error(err, "ConfigError", e.what());
      return kExitConfig;
    }
    if (*integ) return cmd_integrate(ia, out);
    if (*ana) {
      for (const auto& [name, opt] : constants) {
        if (opt->count() > 0) aa.given.insert(name);
      }
      if (ana->get_option("--tau0")->count() + ana->get_option("--phi0")->count() +
              ana->get_option("--theta0")->count() > 1) {
        throw ConfigError("give exactly one of --tau0, --phi0, --theta0");
      }
      return cmd_analytic(aa, out);
    }
    if (*ver) return cmd_verify(scenario, seed, verify_out, out);
    if (*chr) return cmd_christoffel(tensor_n, tensor_point, out);
    if (*cur) return cmd_curvature(tensor_n, tensor_point, out);
  } catch (const Error& e) {
    report_error(err, error_kind_name(e.kind()), e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    report_error(err, "ConfigError", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace taubnut::cli
