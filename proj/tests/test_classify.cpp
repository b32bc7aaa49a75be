#include <doctest.h>

#include <cmath>
#include <numbers>

#include "taubnut/analytic.hpp"
#include "taubnut/verify.hpp"

using namespace taubnut;

namespace {

constexpr double kPi = std::numbers::pi;

FamilyConstants draw(Family f, SeededUniform& u, const ModelParams& params) {
  FamilyConstants c;
  c.family = f;
  c.eps = u(0.0, 1.0) < 0.5 ? -1 : 1;
  c.r1 = u(0.5, 2.0);
  if (f != Family::Radial) c.angular = (u(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * u(0.3, 1.5);
  if (f == Family::TauRadial) c.angular = std::copysign(std::min(std::abs(c.angular), 1.0), c.angular);
  if (f == Family::ConstTheta) {
    c.theta_const = u(0.3, kPi - 0.3);
    if (std::abs(std::cos(c.theta_const)) < 0.05) c.theta_const = 1.0;
  }
  if (f == Family::Meridional) {
    // Keep theta inside (0, pi) at the sampled radius.
    c.theta1 = 0.0;
    const double r = turning_radius(c, params).value * 1.5;
    c.theta1 = 1.3 - *evaluate_family(params, c, r, CurveMode::Aligned).theta;
  }
  return c;
}

}  // namespace

TEST_CASE("seeded family states classify back to their constants") {
  SeededUniform u(7);
  for (Family f : {Family::Radial, Family::TauRadial, Family::Equatorial, Family::Meridional,
                   Family::ConstTheta}) {
    for (int i = 0; i < 20; ++i) {
      const ModelParams params{u(0.5, 2.0)};
      const FamilyConstants c = draw(f, u, params);
      const double r = turning_radius(c, params).value * 1.5;
      const PhaseState s = family_state_at(params, c, r, {0.4, 1.1, 2.0, r});
      CAPTURE(family_tag(f));
      CAPTURE(i);
      const FamilyConstants got = classify(params, s);
      REQUIRE(got.family == f);
      CHECK(got.eps == c.eps);
      CHECK(got.r1 == doctest::Approx(c.r1).epsilon(1e-10));
      CHECK(got.angular == doctest::Approx(c.angular).epsilon(1e-10));
      if (f == Family::ConstTheta) CHECK(got.theta_const == c.theta_const);

      // Anchors put the state on the family at t = 0.
      const FamilyPoint at = evaluate_family(params, got, r, natural_mode(f));
      CHECK(std::abs(at.t) <= 1e-12 * std::max(1.0, std::abs(c.t1)) + 1e-12);
      if (at.tau) CHECK(*at.tau == doctest::Approx(s.point.tau).epsilon(1e-12));
      if (at.phi) CHECK(*at.phi == doctest::Approx(s.point.phi).epsilon(1e-12));
      if (at.theta) CHECK(*at.theta == doctest::Approx(s.point.theta).epsilon(1e-12));
    }
  }
}

TEST_CASE("equatorial example recovers phi0 and r1") {
  const ModelParams params;
  const double r = 2.0;
  const PhaseState s{{0.0, kPi / 2, 0.0, r}, {0.0, 0.0, 1.0 / 3.0, std::sqrt(2.0) / 3.0}};
  const FamilyConstants c = classify(params, s);
  CHECK(c.family == Family::Equatorial);
  CHECK(c.angular == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.r1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.eps == 1);
}

TEST_CASE("constant theta off the equator with the printed tau relation is Thm5") {
  const ModelParams params;
  const double n = 1.0, r = 2.5, theta = kPi / 3, k = 0.9;
  const double dtau = k * (r + 3 * n) * std::cos(theta) / (2 * n * (r + n));
  const PhaseState s{{0.0, theta, 0.0, r}, {dtau, 0.0, k / (r * r - n * n), -0.4}};
  const FamilyConstants c = classify(params, s);
  CHECK(c.family == Family::ConstTheta);
  CHECK(c.angular == doctest::Approx(k).epsilon(1e-12));
  CHECK(c.eps == -1);

  PhaseState off = s;
  off.velocity[coord::Tau] *= 1.1;
  CHECK(classify(params, off).family == Family::Generic);
}

TEST_CASE("constant r with nonzero velocity is not a geodesic") {
  const ModelParams params;
  CHECK_THROWS_AS(classify(params, {{0.0, 1.0, 0.0, 2.0}, {0.0, 0.3, 0.0, 0.0}}), NotAGeodesic);
  CHECK_THROWS_AS(classify(params, {{0.0, 1.0, 0.0, 2.0}, {0.1, 0.0, 0.2, 0.0}}), NotAGeodesic);
}

TEST_CASE("stationary and generic states") {
  const ModelParams params;
  CHECK(classify(params, {{0.0, 1.0, 0.0, 2.0}, {}}).family == Family::StationaryPoint);
  CHECK(classify(params, {{0.0, 1.0, 0.0, 2.0}, {0.1, 0.2, 0.3, 0.4}}).family == Family::Generic);
  // The equatorial pattern away from theta = pi/2 violates the theta equation.
  CHECK(classify(params, {{0.0, 1.0, 0.0, 2.0}, {0.0, 0.0, 0.3, 0.4}}).family == Family::Generic);
  // Velocities below the zero tolerance count as zero.
  CHECK(classify(params, {{0.0, 1.0, 0.0, 2.0}, {1e-12, 0.0, 0.0, 0.4}}).family == Family::Radial);
  CHECK_THROWS_AS(classify(params, {{0.0, 1.0, 0.0, 0.5}, {0.0, 0.0, 0.0, 0.4}}), DomainError);
}
