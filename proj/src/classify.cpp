#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "taubnut/analytic.hpp"

namespace taubnut {

namespace {

// Shifts t1 and the varying-coordinate anchors so the family reaches the state
// at t = 0.
void anchor_through(const ModelParams& params, FamilyConstants& c, const Point& p) {
  c.t1 = c.tau1 = c.phi1 = c.theta1 = 0.0;
  const FamilyPoint at = evaluate_family(params, c, p.r, natural_mode(c.family));
  c.t1 = -at.t;
  if (at.tau) c.tau1 = p.tau - *at.tau;
  if (at.phi) c.phi1 = p.phi - *at.phi;
  if (at.theta) c.theta1 = p.theta - *at.theta;
}

}  // namespace

FamilyConstants classify(const ModelParams& params, const PhaseState& s, ClassifyTolerance tol) {
  require_domain(params, s.point);
  const double n = params.n;
  const double r = s.point.r;
  const double theta = s.point.theta;
  const auto& v = s.velocity;
  auto is_zero = [&](double x) { return std::abs(x) <= tol.zero; };

  const bool still_tau = is_zero(v[coord::Tau]);
  const bool still_theta = is_zero(v[coord::Theta]);
  const bool still_phi = is_zero(v[coord::Phi]);
  const bool still_r = is_zero(v[coord::R]);

  FamilyConstants c;
  if (still_tau && still_theta && still_phi && still_r) {
    c.family = Family::StationaryPoint;
    return c;
  }
  if (still_r) {
    // Constant r forces the quadratic form in (dtau, dtheta, dphi) to vanish.
    throw NotAGeodesic(fmt::format(
        "constant r = {} with nonzero velocity ({}, {}, {}) is not a geodesic", r,
        v[coord::Tau], v[coord::Theta], v[coord::Phi]));
  }

  const double rdot = v[coord::R];
  const double h = (r + n) / (r - n);
  const double area = r * r - n * n;
  const double kinetic = h * rdot * rdot;
  c.eps = rdot > 0.0 ? 1 : -1;

  if (still_tau && still_theta && still_phi) {
    c.family = Family::Radial;
    c.r1 = std::sqrt(kinetic);
  } else if (still_theta && still_phi) {
    c.family = Family::TauRadial;
    c.angular = v[coord::Tau] / h;
    c.r1 = std::sqrt(kinetic + 2.0 * c.angular * c.angular * n / (r - n));
  } else if (still_tau && still_theta) {
    // dtau = 0 and dtheta = 0 leave theta = pi/2 as the only option with dr, dphi != 0.
    if (!(std::abs(std::cos(theta)) <= tol.zero)) {
      c.family = Family::Generic;
      return c;
    }
    c.family = Family::Equatorial;
    c.angular = area * v[coord::Phi];
    c.r1 = std::sqrt(kinetic + c.angular * c.angular / area);
  } else if (still_tau && still_phi) {
    c.family = Family::Meridional;
    c.angular = area * v[coord::Theta];
    c.r1 = std::sqrt(kinetic + c.angular * c.angular / area);
  } else if (still_theta) {
    const double cth = std::cos(theta);
    const double rn2 = (r + n) * (r + n);
    const double phi_term = (4.0 * n * n * cth / rn2 - cth) * v[coord::Phi];
    const double tau_term = 2.0 * n / rn2 * v[coord::Tau];
    const double scale = std::max(1.0, std::abs(phi_term) + std::abs(tau_term));
    if (!(std::abs(phi_term + tau_term) <= tol.zero * scale)) {
      c.family = Family::Generic;
      return c;
    }
    const double sth = std::sin(theta);
    c.family = Family::ConstTheta;
    c.theta_const = theta;
    c.angular = area * v[coord::Phi];
    const double k2 = c.angular * c.angular;
    c.r1 = std::sqrt(kinetic + k2 * cth * cth / (2.0 * n * (r - n)) + k2 * sth * sth / area);
  } else {
    c.family = Family::Generic;
    return c;
  }

  anchor_through(params, c, s.point);
  return c;
}

}  // namespace taubnut
