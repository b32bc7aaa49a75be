#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include <json.hpp>

#include "taubnut/analytic.hpp"
#include "taubnut/integrator.hpp"

namespace taubnut {

inline constexpr const char* kTrajectoryHeader =
    "t,tau,theta,phi,r,dtau,dtheta,dphi,dr,p_tau,p_phi,norm";

// Shortest-to-read exact form: 17 significant digits.
std::string format_double(double x);

// Header, one row per sample, then "# termination=<cause>".
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Inverse of write_trajectory_csv. Throws ConfigError on malformed input.
Trajectory read_trajectory_csv(std::istream& in);

// {family, eps, n, r1, tau0|phi0|theta0, theta_const, t1, tau1|phi1|theta1};
// exactly the keys the family uses.
nlohmann::ordered_json family_to_json(const FamilyConstants& c, double n);

// Throws ConfigError on missing or unknown keys.
std::pair<FamilyConstants, double> family_from_json(const nlohmann::json& j);

}  // namespace taubnut
