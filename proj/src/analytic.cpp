#include "taubnut/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

namespace taubnut {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

void require_family(const FamilyConstants& c, Family expected) {
  if (c.family != expected) {
    throw ConfigError(fmt::format("expected family {}, got {}", family_tag(expected),
                                  family_tag(c.family)));
  }
  c.validate();
}

void require_mode(const FamilyConstants& c, CurveMode mode) {
  if (mode == CurveMode::Corrected && c.family != Family::ConstTheta) {
    throw ConfigError(
        fmt::format("corrected mode only applies to thm5, not {}", family_tag(c.family)));
  }
}

void require_radius(double r, double R, std::string_view what) {
  if (!std::isfinite(r) || r < R) {
    throw DomainError(fmt::format("{}: r = {} below the turning radius {}", what, r, R));
  }
}

struct Thm5Roots {
  double plus;
  double minus;
};

Thm5Roots thm5_roots(double n, double r1, double phi0, double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double p2 = phi0 * phi0;
  const double r12 = r1 * r1;
  const double plus =
      p2 * c2 / (4.0 * n * r12) +
      std::sqrt(n * n + (p2 * p2 * c2 * c2 + 8.0 * n * n * p2 * r12 * c2 +
                         16.0 * n * n * p2 * r12 * s2) /
                            (16.0 * n * n * r12 * r12));
  // Vieta: R+ R- = -(2 n^3 r1^2 + n phi0^2 cos^2 + 2 n phi0^2 sin^2) / (2 n r1^2)
  const double product =
      -(2.0 * n * n * n * r12 + n * p2 * c2 + 2.0 * n * p2 * s2) / (2.0 * n * r12);
  return {plus, product / plus};
}

// Shared Equatorial/Meridional kernel: the printed formulas coincide under
// (phi0, R2, phi1) <-> (theta0, R3, theta1).
AngularCurve angular_kernel(double n, double r1, double k, double t1, double anchor, int eps,
                            double r, CurveMode mode) {
  if (k == 0.0) {
    throw DegenerateError("zero angular constant collapses the family onto thm1");
  }
  const double R2 = n * n + k * k / (r1 * r1);
  const double R = std::sqrt(R2);
  require_radius(r, R, "angular family");

  // Factored so that r == R gives w == 0 exactly.
  const double w = std::sqrt(std::max(0.0, (r - R) * (r + R)));
  AngularCurve out;
  out.t = t1 + eps / r1 * (w + n * std::log(r + w));

  // At r = R the arctan argument r1 (rn - R^2) / (k w) diverges with the sign of -k.
  const double limit_at_R = -sign_of(k) * kPi / 2.0;
  if (w == 0.0) {
    out.angle = anchor + eps * limit_at_R;
    out.turning_point_limit = true;
  } else {
    out.angle = anchor + eps * std::atan(r1 * (r * n - R2) / (k * w));
  }
  if (mode == CurveMode::Aligned) {
    out.t -= eps / r1 * n * std::log(R);
    out.angle -= eps * limit_at_R;
  }
  return out;
}

}  // namespace

std::string_view family_tag(Family f) {
  switch (f) {
    case Family::Radial: return "thm1";
    case Family::TauRadial: return "thm2";
    case Family::Equatorial: return "thm3";
    case Family::Meridional: return "thm4";
    case Family::ConstTheta: return "thm5";
    case Family::StationaryPoint: return "stationary";
    case Family::Generic: return "generic";
  }
  return "generic";
}

Family family_from_tag(std::string_view tag) {
  for (Family f : {Family::Radial, Family::TauRadial, Family::Equatorial, Family::Meridional,
                   Family::ConstTheta, Family::StationaryPoint, Family::Generic}) {
    if (family_tag(f) == tag) return f;
  }
  throw ConfigError(fmt::format("unknown family '{}'", tag));
}

std::string_view mode_name(CurveMode m) {
  switch (m) {
    case CurveMode::Literal: return "literal";
    case CurveMode::Aligned: return "aligned";
    case CurveMode::Corrected: return "corrected";
  }
  return "literal";
}

CurveMode mode_from_name(std::string_view name) {
  for (CurveMode m : {CurveMode::Literal, CurveMode::Aligned, CurveMode::Corrected}) {
    if (mode_name(m) == name) return m;
  }
  throw ConfigError(fmt::format("unknown mode '{}'", name));
}

CurveMode natural_mode(Family f) {
  return f == Family::ConstTheta ? CurveMode::Corrected : CurveMode::Aligned;
}

void FamilyConstants::validate() const {
  if (eps != 1 && eps != -1) {
    throw ConfigError(fmt::format("eps must be +1 or -1, got {}", eps));
  }
  if (family == Family::StationaryPoint || family == Family::Generic) return;
  if (r1 == 0.0) {
    throw DegenerateError("r1 = 0 has no closed-form geodesic");
  }
  if (!(r1 > 0.0) || !std::isfinite(r1)) {
    throw ConfigError(fmt::format("r1 must be positive and finite, got {}", r1));
  }
  for (double v : {angular, theta_const, t1, tau1, phi1, theta1}) {
    if (!std::isfinite(v)) throw ConfigError("non-finite family constant");
  }
  if (family == Family::ConstTheta && !(theta_const > 0.0 && theta_const < kPi)) {
    throw ConfigError(fmt::format("theta_const must lie in (0, pi), got {}", theta_const));
  }
}

TurningRadius turning_radius(const FamilyConstants& c, const ModelParams& params) {
  c.validate();
  const double n = params.n;
  const double k = c.angular;
  TurningRadius out;
  out.family = c.family;
  switch (c.family) {
    case Family::Radial:
      out.value = n;
      break;
    case Family::TauRadial:
      out.value = n + 2.0 * k * k * n / (c.r1 * c.r1);
      break;
    case Family::Equatorial:
    case Family::Meridional:
      out.value = std::sqrt(n * n + k * k / (c.r1 * c.r1));
      break;
    case Family::ConstTheta: {
      const Thm5Roots roots = thm5_roots(n, c.r1, k, c.theta_const);
      out.value = roots.plus;
      out.lower = roots.minus;
      break;
    }
    default:
      throw ConfigError(
          fmt::format("family {} has no turning radius", family_tag(c.family)));
  }
  return out;
}

double F_eval(const ModelParams& params, double r, double r1, double phi0, double theta) {
  const double n = params.n;
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double p2 = phi0 * phi0;
  return 2.0 * n * r1 * r1 * r * r - p2 * c2 * r -
         (2.0 * n * n * n * r1 * r1 + n * p2 * c2 + 2.0 * n * p2 * s2);
}

double thm1_t_of_r(const ModelParams& params, const FamilyConstants& c, double r,
                   CurveMode mode) {
  require_family(c, Family::Radial);
  require_mode(c, mode);
  const double n = params.n;
  require_radius(r, n, "thm1");
  double bracket =
      std::sqrt(r * r - n * n) + 2.0 * n * std::log(std::sqrt(r + n) + std::sqrt(r - n));
  if (mode == CurveMode::Aligned) bracket -= n * std::log(2.0 * n);
  return c.t1 + c.eps / c.r1 * bracket;
}

TauCurve thm2_curves(const ModelParams& params, const FamilyConstants& c, double r,
                     CurveMode mode) {
  require_family(c, Family::TauRadial);
  require_mode(c, mode);
  const double n = params.n;
  const double R1 = turning_radius(c, params).value;
  if (R1 == n) {
    throw DegenerateError("tau0 = 0 gives R1 = n; use thm1");
  }
  require_radius(r, R1, "thm2");

  const double u = std::sqrt(r - R1);
  const double v = std::sqrt(r + n);
  const double log_term = std::log(u + v);
  const double two_n_32 = 2.0 * std::pow(2.0 * n, 1.5);
  const double gap = std::sqrt(R1 - n);

  TauCurve out;
  out.t = c.t1 + c.eps / c.r1 * (u * v + (n + R1) * log_term);
  out.tau = c.tau1 + c.eps * c.angular / c.r1 *
                         ((5.0 * n + R1) * log_term +
                          two_n_32 / gap * std::atan(std::sqrt(2.0 * n) * u / (gap * v)) + u * v);
  if (mode == CurveMode::Aligned) {
    const double log_R = std::log(std::sqrt(R1 + n));
    out.t -= c.eps / c.r1 * (n + R1) * log_R;
    out.tau -= c.eps * c.angular / c.r1 * (5.0 * n + R1) * log_R;
  }
  return out;
}

AngularCurve thm3_curves(const ModelParams& params, const FamilyConstants& c, double r,
                         CurveMode mode) {
  require_family(c, Family::Equatorial);
  require_mode(c, mode);
  return angular_kernel(params.n, c.r1, c.angular, c.t1, c.phi1, c.eps, r, mode);
}

AngularCurve thm4_curves(const ModelParams& params, const FamilyConstants& c, double r,
                         CurveMode mode) {
  require_family(c, Family::Meridional);
  require_mode(c, mode);
  const double n = params.n;
  AngularCurve out = angular_kernel(n, c.r1, c.angular, c.t1, c.theta1, c.eps, r, mode);

  // theta(r) is monotone on [R3, inf); its range is spanned by the two end values.
  const double R3 = turning_radius(c, params).value;
  const AngularCurve start = angular_kernel(n, c.r1, c.angular, c.t1, c.theta1, c.eps, R3, mode);
  double far = c.theta1 + c.eps * std::atan(c.r1 * n / c.angular);
  if (mode == CurveMode::Aligned) far += c.eps * sign_of(c.angular) * kPi / 2.0;
  const double lo = std::min(start.angle, far);
  const double hi = std::max(start.angle, far);
  out.exits_range = !(lo > 0.0 && hi < kPi);
  return out;
}

ConstThetaCurve thm5_curves(const ModelParams& params, const FamilyConstants& c, double r,
                            CurveMode mode) {
  require_family(c, Family::ConstTheta);
  require_mode(c, mode);
  const double n = params.n;
  const double k = c.angular;
  if (k == 0.0) {
    throw DegenerateError("phi0 = 0 gives R+ = n; use thm2");
  }
  const Thm5Roots roots = thm5_roots(n, c.r1, k, c.theta_const);
  const double Rp = roots.plus;
  const double Rm = roots.minus;
  require_radius(r, Rp, "thm5");

  const double cth = std::cos(c.theta_const);
  const double S = std::sqrt((r - Rp) * (r - Rm));
  const double A = std::asinh(std::sqrt((r - Rp) / (Rp - Rm)));
  const double shift = k * k * cth * cth / (2.0 * n * c.r1 * c.r1);
  const double arc =
      std::atan(std::sqrt((r - Rp) * (n - Rm) / ((r - Rm) * (Rp - n))));
  const double arc_scale = 2.0 * k / std::sqrt((Rp - n) * (n - Rm));
  const double root2n = std::sqrt(2.0 * n);

  ConstThetaCurve out;
  if (mode == CurveMode::Corrected) {
    out.t = c.t1 + c.eps / c.r1 * (S + (shift + 2.0 * n) * A);
    out.phi = c.phi1 + c.eps * arc_scale / c.r1 * arc;
    out.tau = c.tau1 + c.eps * k * cth / (2.0 * n * c.r1) * (S + (shift + 6.0 * n) * A);
  } else {
    // Printed forms; they already vanish at r = R+, so Aligned == Literal here.
    out.t = c.t1 + c.eps / root2n * (S + (shift + 2.0 * n) * A);
    out.phi = c.phi1 + c.eps * root2n * arc_scale * arc;
    out.tau = c.tau1 + c.eps * k * cth / root2n * (S + (shift + 6.0 * n) * A);
  }
  return out;
}

FamilyPoint evaluate_family(const ModelParams& params, const FamilyConstants& c, double r,
                            CurveMode mode) {
  FamilyPoint out;
  switch (c.family) {
    case Family::Radial:
      out.t = thm1_t_of_r(params, c, r, mode);
      break;
    case Family::TauRadial: {
      const TauCurve v = thm2_curves(params, c, r, mode);
      out.t = v.t;
      out.tau = v.tau;
      break;
    }
    case Family::Equatorial: {
      const AngularCurve v = thm3_curves(params, c, r, mode);
      out.t = v.t;
      out.phi = v.angle;
      break;
    }
    case Family::Meridional: {
      const AngularCurve v = thm4_curves(params, c, r, mode);
      out.t = v.t;
      out.theta = v.angle;
      break;
    }
    case Family::ConstTheta: {
      const ConstThetaCurve v = thm5_curves(params, c, r, mode);
      out.t = v.t;
      out.phi = v.phi;
      out.tau = v.tau;
      break;
    }
    default:
      throw ConfigError(fmt::format("family {} has no closed form", family_tag(c.family)));
  }
  return out;
}

FamilyPoint family_derivatives(const ModelParams& params, const FamilyConstants& c, double r,
                               CurveMode mode) {
  require_mode(c, mode);
  const double n = params.n;
  const double R = turning_radius(c, params).value;
  require_radius(r, R, "family_derivatives");
  const double eps = c.eps;
  const double k = c.angular;

  FamilyPoint d;
  switch (c.family) {
    case Family::Radial:
      d.t = eps / c.r1 * std::sqrt((r + n) / (r - n));
      break;
    case Family::TauRadial:
      d.t = eps / c.r1 * std::sqrt((r + n) / (r - R));
      d.tau = eps * k / c.r1 * std::pow(r + n, 1.5) / ((r - n) * std::sqrt(r - R));
      break;
    case Family::Equatorial:
    case Family::Meridional: {
      const double w = std::sqrt(r * r - R * R);
      d.t = eps / c.r1 * (r + n) / w;
      const double angle = eps * k / (c.r1 * (r - n) * w);
      if (c.family == Family::Equatorial) {
        d.phi = angle;
      } else {
        d.theta = angle;
      }
      break;
    }
    case Family::ConstTheta: {
      const Thm5Roots roots = thm5_roots(n, c.r1, k, c.theta_const);
      const double cth = std::cos(c.theta_const);
      const double root2n = std::sqrt(2.0 * n);
      const double root = mode == CurveMode::Corrected
                              ? std::sqrt(F_eval(params, r, c.r1, k, c.theta_const))
                              : std::sqrt((r - roots.plus) * (r - roots.minus));
      d.t = eps * root2n * (r + n) / root;
      d.phi = k / (r * r - n * n) * d.t;
      d.tau = k * (r + 3.0 * n) * cth / (2.0 * n * (r + n)) * d.t;
      break;
    }
    default:
      throw ConfigError(fmt::format("family {} has no closed form", family_tag(c.family)));
  }
  return d;
}

PhaseState family_state_at(const ModelParams& params, const FamilyConstants& c, double r,
                           const Point& base) {
  const double n = params.n;
  const double R = turning_radius(c, params).value;
  require_radius(r, R, "family_state_at");
  if (!(r > n)) throw DomainError("family state requires r > n");
  const FamilyPoint at = evaluate_family(params, c, r, natural_mode(c.family));
  const double k = c.angular;
  const double eps = c.eps;

  PhaseState s;
  s.point = base;
  s.point.r = r;
  Vec4& v = s.velocity;
  v = {};
  switch (c.family) {
    case Family::Radial:
      v[coord::R] = eps * c.r1 * std::sqrt((r - n) / (r + n));
      break;
    case Family::TauRadial:
      s.point.tau = *at.tau;
      v[coord::Tau] = k * (r + n) / (r - n);
      v[coord::R] = eps * c.r1 * std::sqrt((r - R) / (r + n));
      break;
    case Family::Equatorial:
      s.point.theta = kPi / 2.0;
      s.point.phi = *at.phi;
      v[coord::Phi] = k / (r * r - n * n);
      v[coord::R] = eps * std::sqrt(std::max(0.0, c.r1 * c.r1 * (r * r - n * n) - k * k)) / (r + n);
      break;
    case Family::Meridional:
      s.point.theta = *at.theta;
      v[coord::Theta] = k / (r * r - n * n);
      v[coord::R] = eps * c.r1 * std::sqrt(std::max(0.0, r * r - R * R)) / (r + n);
      break;
    case Family::ConstTheta: {
      const double cth = std::cos(c.theta_const);
      s.point.theta = c.theta_const;
      s.point.phi = *at.phi;
      s.point.tau = *at.tau;
      v[coord::Phi] = k / (r * r - n * n);
      v[coord::Tau] = k * (r + 3.0 * n) * cth / (2.0 * n * (r + n));
      v[coord::R] = eps * std::sqrt(std::max(0.0, F_eval(params, r, c.r1, k, c.theta_const))) /
                    (std::sqrt(2.0 * n) * (r + n));
      break;
    }
    default:
      throw ConfigError(fmt::format("family {} has no closed form", family_tag(c.family)));
  }
  return s;
}

double invert_t_of_r(const FamilyConstants& family, const ModelParams& params, double t,
                     CurveMode mode) {
  const double R = turning_radius(family, params).value;
  const double eps = family.eps;
  auto residual = [&](double r) {
    return eps * (evaluate_family(params, family, r, mode).t - t);
  };

  const double at_R = residual(R);
  if (at_R == 0.0) return R;
  if (!(at_R < 0.0) || !std::isfinite(t)) {
    throw RangeError(fmt::format("t = {} is outside the range of the eps = {} branch", t,
                                 family.eps));
  }

  double lo = R;
  double hi = R + std::max(1.0, R);
  double f_hi = residual(hi);
  for (int i = 0; f_hi < 0.0; ++i) {
    if (i == 200) throw RangeError(fmt::format("could not bracket t = {}", t));
    lo = hi;
    hi = 2.0 * hi;
    f_hi = residual(hi);
  }
  if (f_hi == 0.0) return hi;

  auto converged = [](double a, double b) {
    return std::abs(b - a) <= 1e-12 * std::max(1.0, std::min(a, b));
  };
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, residual(lo), f_hi,
                                                        converged, iterations);
  return 0.5 * (a + b);
}

BranchPoint two_branch_point(const ModelParams& params, const FamilyConstants& c, double t) {
  FamilyConstants branch = c;
  branch.eps = t < c.t1 ? -1 : 1;
  const CurveMode mode = natural_mode(c.family);
  BranchPoint out;
  out.r = t == c.t1 ? turning_radius(c, params).value : invert_t_of_r(branch, params, t, mode);
  out.at = evaluate_family(params, branch, out.r, mode);
  return out;
}

}  // namespace taubnut
