#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "taubnut/io.hpp"

using namespace taubnut;

namespace {

Trajectory sample_trajectory() {
  IntegrationConfig cfg;
  cfg.t_end = 2.0;
  const PhaseState s0{{0.1, 1.2, -0.3, 2.0}, {0.2, 0.05, 0.1, -0.3}};
  return integrate(ModelParams{}, s0, cfg);
}

std::set<std::string> keys(const nlohmann::ordered_json& j) {
  std::set<std::string> out;
  for (const auto& [k, v] : j.items()) out.insert(k);
  return out;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("trajectory CSV round trip is exact and byte-stable") {
  const Trajectory traj = sample_trajectory();
  std::ostringstream first;
  write_trajectory_csv(first, traj);
  const std::string text = first.str();
  CHECK(text.rfind(std::string(kTrajectoryHeader) + "\n", 0) == 0);
  CHECK(text.find("# termination=Horizon\n") != std::string::npos);

  std::istringstream in(text);
  const Trajectory back = read_trajectory_csv(in);
  REQUIRE(back.samples.size() == traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    CHECK(back.samples[i].t == traj.samples[i].t);
    CHECK(back.samples[i].state.as_array() == traj.samples[i].state.as_array());
    CHECK(back.samples[i].norm == traj.samples[i].norm);
  }
  std::ostringstream second;
  write_trajectory_csv(second, back);
  CHECK(second.str() == text);
}

TEST_CASE("malformed trajectory CSV is a configuration error") {
  std::istringstream no_header("1,2,3\n");
  CHECK_THROWS_AS(read_trajectory_csv(no_header), ConfigError);
  std::istringstream short_row(std::string(kTrajectoryHeader) + "\n1,2,3\n# termination=Horizon\n");
  CHECK_THROWS_AS(read_trajectory_csv(short_row), ConfigError);
  std::istringstream bad_number(std::string(kTrajectoryHeader) +
                                "\n0,0,1,0,2,0,0,0,x,0,0,0\n# termination=Horizon\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad_number), ConfigError);
  std::istringstream unterminated(std::string(kTrajectoryHeader) + "\n0,0,1,0,2,0,0,0,1,0,0,0\n");
  CHECK_THROWS_AS(read_trajectory_csv(unterminated), ConfigError);
}

TEST_CASE("family JSON carries exactly the keys each family uses") {
  FamilyConstants c;
  c.family = Family::Radial;
  CHECK(keys(family_to_json(c, 1.0)) == std::set<std::string>{"family", "n", "eps", "r1", "t1"});
  c.family = Family::TauRadial;
  CHECK(keys(family_to_json(c, 1.0)) ==
        std::set<std::string>{"family", "n", "eps", "r1", "tau0", "t1", "tau1"});
  c.family = Family::Meridional;
  CHECK(keys(family_to_json(c, 1.0)) ==
        std::set<std::string>{"family", "n", "eps", "r1", "theta0", "t1", "theta1"});
  c.family = Family::ConstTheta;
  CHECK(keys(family_to_json(c, 1.0)) == std::set<std::string>{"family", "n", "eps", "r1", "phi0",
                                                                "theta_const", "t1", "tau1", "phi1"});
  c.family = Family::Generic;
  CHECK(keys(family_to_json(c, 1.0)) == std::set<std::string>{"family", "n"});
}

TEST_CASE("family JSON round trip and rejection") {
  FamilyConstants c;
  c.family = Family::ConstTheta;
  c.eps = -1;
  c.r1 = 1.25;
  c.angular = 0.7;
  c.theta_const = 1.1;
  c.t1 = 0.3;
  c.tau1 = -0.2;
  c.phi1 = 0.9;
  const auto [back, n] = family_from_json(nlohmann::json::parse(family_to_json(c, 0.8).dump()));
  CHECK(n == 0.8);
  CHECK(back.family == c.family);
  CHECK(back.eps == -1);
  CHECK(back.r1 == c.r1);
  CHECK(back.angular == c.angular);
  CHECK(back.theta_const == c.theta_const);
  CHECK(back.tau1 == c.tau1);
  CHECK(back.phi1 == c.phi1);

  auto j = nlohmann::json::parse(family_to_json(c, 0.8).dump());
  j["theta0"] = 1.0;
  CHECK_THROWS_AS(family_from_json(j), ConfigError);
  j.erase("theta0");
  j.erase("phi1");
  CHECK_THROWS_AS(family_from_json(j), ConfigError);
  CHECK_THROWS_AS(family_from_json(nlohmann::json::array()), ConfigError);
  CHECK_THROWS_AS(family_from_json({{"family", "thm9"}, {"n", 1.0}}), ConfigError);
  CHECK_THROWS_AS(family_from_json({{"family", "thm1"}, {"n", 1.0}, {"eps", 0.5}, {"r1", 1.0},
                                    {"t1", 0.0}}),
                  ConfigError);
}
