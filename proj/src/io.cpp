#include "taubnut/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace taubnut {

namespace {

const char* angular_key(Family f) {
  switch (f) {
    case Family::TauRadial: return "tau0";
    case Family::Equatorial:
    case Family::ConstTheta: return "phi0";
    case Family::Meridional: return "theta0";
    default: return nullptr;
  }
}

std::vector<std::string> anchor_keys(Family f) {
  switch (f) {
    case Family::TauRadial: return {"tau1"};
    case Family::Equatorial: return {"phi1"};
    case Family::Meridional: return {"theta1"};
    case Family::ConstTheta: return {"tau1", "phi1"};
    default: return {};
  }
}

double anchor_value(const FamilyConstants& c, const std::string& key) {
  if (key == "tau1") return c.tau1;
  if (key == "phi1") return c.phi1;
  return c.theta1;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError(fmt::format("malformed number '{}'", field));
  }
  return value;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const Sample& s : traj.samples) {
    const Point& p = s.state.point;
    const Vec4& v = s.state.velocity;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                       "{:.17g},{:.17g},{:.17g}\n",
                       s.t, p.tau, p.theta, p.phi, p.r, v[0], v[1], v[2], v[3], s.p_tau,
                       s.p_phi, s.norm);
  }
  out << "# termination=" << termination_name(traj.termination) << '\n';
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ConfigError("trajectory CSV: missing or unexpected header");
  }
  Trajectory traj;
  bool terminated = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# termination=", 0) == 0) {
      traj.termination = termination_from_name(line.substr(14));
      terminated = true;
      continue;
    }
    if (line[0] == '#') continue;
    std::array<double, 12> f{};
    std::size_t start = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::size_t comma = line.find(',', start);
      const bool last = i + 1 == f.size();
      if (last != (comma == std::string::npos)) {
        throw ConfigError(fmt::format("trajectory CSV: expected 12 fields in '{}'", line));
      }
      const std::size_t end = last ? line.size() : comma;
      f[i] = parse_double(std::string_view(line).substr(start, end - start));
      start = end + 1;
    }
    Sample s;
    s.t = f[0];
    s.state.point = {f[1], f[2], f[3], f[4]};
    s.state.velocity = {f[5], f[6], f[7], f[8]};
    s.p_tau = f[9];
    s.p_phi = f[10];
    s.norm = f[11];
    traj.samples.push_back(s);
  }
  if (!terminated) throw ConfigError("trajectory CSV: missing termination line");
  return traj;
}

nlohmann::ordered_json family_to_json(const FamilyConstants& c, double n) {
  nlohmann::ordered_json j;
  j["family"] = std::string(family_tag(c.family));
  j["n"] = n;
  if (c.family == Family::StationaryPoint || c.family == Family::Generic) return j;
  j["eps"] = c.eps;
  j["r1"] = c.r1;
  if (const char* key = angular_key(c.family)) j[key] = c.angular;
  if (c.family == Family::ConstTheta) j["theta_const"] = c.theta_const;
  j["t1"] = c.t1;
  for (const std::string& key : anchor_keys(c.family)) j[key] = anchor_value(c, key);
  return j;
}

std::pair<FamilyConstants, double> family_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("family constants must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ConfigError("family constants: missing string key 'family'");
  }
  FamilyConstants c;
  c.family = family_from_tag(j["family"].get<std::string>());

  std::set<std::string> allowed = {"family", "n"};
  if (c.family != Family::StationaryPoint && c.family != Family::Generic) {
    allowed.insert({"eps", "r1", "t1"});
    if (const char* key = angular_key(c.family)) allowed.insert(key);
    if (c.family == Family::ConstTheta) allowed.insert("theta_const");
    for (const std::string& key : anchor_keys(c.family)) allowed.insert(key);
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(fmt::format("family constants: unknown key '{}' for {}", key,
                                    family_tag(c.family)));
    }
  }
  auto number = [&](const std::string& key) {
    if (!j.contains(key)) {
      throw ConfigError(
          fmt::format("family constants: missing key '{}' for {}", key, family_tag(c.family)));
    }
    if (!j[key].is_number()) throw ConfigError(fmt::format("key '{}' must be a number", key));
    return j[key].get<double>();
  };

  const double n = number("n");
  if (c.family == Family::StationaryPoint || c.family == Family::Generic) return {c, n};
  number("eps");
  if (!j["eps"].is_number_integer()) throw ConfigError("key 'eps' must be +1 or -1");
  c.eps = j["eps"].get<int>();
  c.r1 = number("r1");
  c.t1 = number("t1");
  if (const char* key = angular_key(c.family)) c.angular = number(key);
  if (c.family == Family::ConstTheta) c.theta_const = number("theta_const");
  for (const std::string& key : anchor_keys(c.family)) {
    const double v = number(key);
    if (key == "tau1") c.tau1 = v;
    if (key == "phi1") c.phi1 = v;
    if (key == "theta1") c.theta1 = v;
  }
  c.validate();
  return {c, n};
}

}  // namespace taubnut
