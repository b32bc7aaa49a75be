#pragma once

// Closed-form geodesic families of the self-dual Taub-NUT metric.
//
//   Radial      (thm1)  tau, theta, phi constant; passes through r = n
//   TauRadial   (thm2)  theta, phi constant; turning radius R1 = n + 2 tau0^2 n / r1^2
//   Equatorial  (thm3)  theta = pi/2, tau constant; R2 = sqrt(n^2 + phi0^2 / r1^2)
//   Meridional  (thm4)  tau, phi constant; R3 = sqrt(n^2 + theta0^2 / r1^2)
//   ConstTheta  (thm5)  theta constant off the equator; R+ is the larger root of F(r)
//
// Every family is parameterised by r on the branch r >= R; eps = +1 moves
// outward as t grows and eps = -1 inward.

#include <numbers>
#include <optional>
#include <string_view>

#include "taubnut/geometry.hpp"
#include "taubnut/integrator.hpp"

namespace taubnut {

enum class Family { Radial, TauRadial, Equatorial, Meridional, ConstTheta, StationaryPoint, Generic };

std::string_view family_tag(Family f);
// Accepts "thm1".."thm5", "stationary", "generic". Throws ConfigError.
Family family_from_tag(std::string_view tag);

// Literal:   the closed forms exactly as printed, integration constants included.
// Aligned:   literal minus its value at r = R, so t(R) = t1 and angle(R) = anchor.
// Corrected: ConstTheta only; dt/dr = eps sqrt(2n) (r+n) / sqrt(F(r)) throughout.
enum class CurveMode { Literal, Aligned, Corrected };

std::string_view mode_name(CurveMode m);
CurveMode mode_from_name(std::string_view name);

struct FamilyConstants {
  Family family = Family::Generic;
  int eps = 1;
  double r1 = 1.0;
  // tau0 (TauRadial), phi0 (Equatorial, ConstTheta) or theta0 (Meridional).
  double angular = 0.0;
  // Fixed polar angle of ConstTheta.
  double theta_const = std::numbers::pi / 2;
  double t1 = 0.0;
  double tau1 = 0.0;
  double phi1 = 0.0;
  double theta1 = 0.0;

  // eps in {+1, -1}; r1 > 0 for the five closed-form families (DegenerateError
  // for r1 == 0, ConfigError otherwise).
  void validate() const;
};

// The mode in which a family's curves satisfy their own boundary conditions:
// Corrected for ConstTheta, Aligned otherwise.
CurveMode natural_mode(Family f);

struct TurningRadius {
  Family family = Family::Generic;
  double value = 0.0;
  // Smaller root R- of F (ConstTheta only).
  std::optional<double> lower;
};

TurningRadius turning_radius(const FamilyConstants& family, const ModelParams& params);

// F(r) = 2 n r1^2 r^2 - phi0^2 cos^2(theta) r
//        - (2 n^3 r1^2 + n phi0^2 cos^2(theta) + 2 n phi0^2 sin^2(theta))
double F_eval(const ModelParams& params, double r, double r1, double phi0, double theta);

double thm1_t_of_r(const ModelParams& params, const FamilyConstants& c, double r,
                   CurveMode mode = CurveMode::Literal);

struct TauCurve {
  double t = 0.0;
  double tau = 0.0;
};

TauCurve thm2_curves(const ModelParams& params, const FamilyConstants& c, double r,
                     CurveMode mode = CurveMode::Literal);

struct AngularCurve {
  double t = 0.0;
  double angle = 0.0;
  // r == R: the arctan argument is infinite and its one-sided limit was returned.
  bool turning_point_limit = false;
  // Meridional only: the angle sweeps outside (0, pi) somewhere on [R, inf).
  bool exits_range = false;
};

AngularCurve thm3_curves(const ModelParams& params, const FamilyConstants& c, double r,
                         CurveMode mode = CurveMode::Literal);
AngularCurve thm4_curves(const ModelParams& params, const FamilyConstants& c, double r,
                         CurveMode mode = CurveMode::Literal);

struct ConstThetaCurve {
  double t = 0.0;
  double phi = 0.0;
  double tau = 0.0;
};

ConstThetaCurve thm5_curves(const ModelParams& params, const FamilyConstants& c, double r,
                            CurveMode mode = CurveMode::Corrected);

// t and whichever coordinates vary along the family, at radius r.
struct FamilyPoint {
  double t = 0.0;
  std::optional<double> tau;
  std::optional<double> theta;
  std::optional<double> phi;
};

FamilyPoint evaluate_family(const ModelParams& params, const FamilyConstants& c, double r,
                            CurveMode mode);

// dt/dr and d(angle)/dr from the first integrals of each family. In Literal mode
// ConstTheta uses the printed sqrt((r-R+)(r-R-)) in place of sqrt(F).
FamilyPoint family_derivatives(const ModelParams& params, const FamilyConstants& c, double r,
                               CurveMode mode);

// State at radius r on the family's eps branch. Coordinates that vary take
// their values from the curves in natural_mode; constant ones come from `base`.
PhaseState family_state_at(const ModelParams& params, const FamilyConstants& c, double r,
                           const Point& base = {});

// Solves t(r) = t for r >= R on the eps branch, to |dr| <= 1e-12 max(1, r).
// Throws RangeError if t is outside the branch's range.
double invert_t_of_r(const FamilyConstants& family, const ModelParams& params, double t,
                     CurveMode mode);

// A family curve through its turning point: the eps = -1 branch for t < t1,
// r = R at t = t1, then the eps = +1 branch, in natural_mode.
struct BranchPoint {
  double r = 0.0;
  FamilyPoint at;
};

BranchPoint two_branch_point(const ModelParams& params, const FamilyConstants& c, double t);

struct ClassifyTolerance {
  double zero = 1e-10;
};

// Identifies the constancy pattern of s (a zero velocity component is read as
// a constant coordinate), checks the compatibility constraints of the geodesic
// system and extracts the family constants from the first integrals. Anchors
// are set so the family passes through s at t = 0. Returns StationaryPoint for
// zero velocity and Generic when no closed-form family applies. Throws
// NotAGeodesic for constant r with nonzero velocity.
FamilyConstants classify(const ModelParams& params, const PhaseState& s,
                         ClassifyTolerance tol = {});

}  // namespace taubnut
