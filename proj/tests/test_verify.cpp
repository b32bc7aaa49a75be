#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "taubnut/verify.hpp"

using namespace taubnut;

namespace {

constexpr double kPi = std::numbers::pi;

FamilyConstants make(Family f, double r1, double angular) {
  FamilyConstants c;
  c.family = f;
  c.r1 = r1;
  c.angular = angular;
  return c;
}

const Check* find_check(const VerificationReport& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                               [&](const Check& c) { return c.name == name; });
  return it == r.checks.end() ? nullptr : &*it;
}

bool has_finding(const VerificationReport& r, const std::string& id) {
  return std::any_of(r.findings.begin(), r.findings.end(),
                     [&](const Finding& f) { return f.id == id; });
}

}  // namespace

TEST_CASE("SeededUniform is reproducible and stays in range") {
  SeededUniform a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a(-2.0, 3.0);
    CHECK(x == b(-2.0, 3.0));
    CHECK(x >= -2.0);
    CHECK(x < 3.0);
    differs = differs || x != c(-2.0, 3.0);
  }
  CHECK(differs);
}

TEST_CASE("checks compare against their bound in the declared direction") {
  CHECK(Check{"a", 1e-7, 1e-6, Check::Bound::Upper}.pass());
  CHECK_FALSE(Check{"a", 1e-5, 1e-6, Check::Bound::Upper}.pass());
  CHECK(Check{"b", 2.0, 1e-2, Check::Bound::Lower}.pass());
  CHECK_FALSE(Check{"b", 1e-3, 1e-2, Check::Bound::Lower}.pass());
  CHECK_FALSE(Check{"c", NAN, 1.0, Check::Bound::Upper}.pass());
}

TEST_CASE("Thm3 numeric and closed-form solutions agree") {
  const VerificationReport r =
      compare_numeric_analytic(make(Family::Equatorial, 1.0, 1.0), ModelParams{}, CompareConfig{});
  CHECK(r.pass());
  for (const char* name : {"deviation.t", "deviation.phi", "deviation.r", "deviation.tau",
                           "deviation.theta", "drift.p_phi", "drift.norm"}) {
    CAPTURE(name);
    const Check* c = find_check(r, name);
    REQUIRE(c != nullptr);
    CHECK(c->value <= 1e-6);
  }
  const nlohmann::ordered_json j = r.to_json();
  CHECK(j["pass"] == true);
  CHECK(j["family"] == "thm3");
}

TEST_CASE("Thm1 passthrough matches one-sided integrations") {
  const VerificationReport r = radial_passthrough_check(ModelParams{0.5}, 1.0, CompareConfig{});
  CHECK(r.pass());
  REQUIRE(find_check(r, "stitched.asymmetry") != nullptr);
  CHECK(find_check(r, "incoming.r")->value <= 1e-8);
  CHECK(find_check(r, "outgoing.r")->value <= 1e-8);
}

TEST_CASE("Thm5 factor check: corrected passes, literal deviates by r1 sqrt(2n)") {
  FamilyConstants c = make(Family::ConstTheta, 1.0, 1.0);
  c.theta_const = kPi / 3;
  const VerificationReport r = const_theta_factor_check(c, ModelParams{}, CompareConfig{});
  CHECK(r.pass());
  CHECK(has_finding(r, "thm5-literal-factor"));
  CHECK(find_check(r, "corrected.deviation.t")->value <= 1e-6);
  CHECK(find_check(r, "literal.max_deviation")->value >= 1e-2);
  CHECK(find_check(r, "literal.phi_ratio_vs_r1_sqrt2n")->value <= 1e-9);

  // With r1 sqrt(2n) = 1 the printed phi and tau are exact; only t keeps 1/(2n).
  FamilyConstants unit = c;
  unit.r1 = 1.0;
  const VerificationReport u = const_theta_factor_check(unit, ModelParams{0.5}, CompareConfig{});
  CHECK(u.pass());
  CHECK(find_check(u, "literal.max_deviation") == nullptr);
}

TEST_CASE("derivative sweep") {
  const ModelParams params;
  const FamilyConstants c2 = make(Family::TauRadial, std::sqrt(2.0), 1.0);
  const VerificationReport r2 =
      derivative_sweep(c2, params, 2.0 * 1.001, 10.0, 50, CurveMode::Literal);
  CHECK(r2.pass());
  CHECK(find_check(r2, "derivative.tau")->value <= 1e-7);
  CHECK(r2.findings.empty());

  const VerificationReport r3 = derivative_sweep(make(Family::Equatorial, 1.3, 0.7), params, 1.2,
                                                 8.0, 30, CurveMode::Aligned);
  const VerificationReport r4 = derivative_sweep(make(Family::Meridional, 1.3, 0.7), params, 1.2,
                                                 8.0, 30, CurveMode::Aligned);
  CHECK(r3.pass());
  CHECK(find_check(r3, "derivative.t")->value == find_check(r4, "derivative.t")->value);
  CHECK(find_check(r3, "derivative.phi")->value == find_check(r4, "derivative.theta")->value);

  CHECK_THROWS_AS(derivative_sweep(c2, params, 1.9, 10.0, 50, CurveMode::Literal), DomainError);
  CHECK_THROWS_AS(derivative_sweep(c2, params, 5.0, 3.0, 50, CurveMode::Literal), DomainError);
}

TEST_CASE("a wrong derivative is reported as a finding, not an exception") {
  // Printed Thm5 t(r) against the first-integral dt/dr: off by 1/(2n) when n != 1/2.
  FamilyConstants c = make(Family::ConstTheta, 1.0, 1.0);
  c.theta_const = kPi / 3;
  VerificationReport r;
  CHECK_NOTHROW(r = derivative_sweep(c, ModelParams{}, 1.5, 10.0, 20, CurveMode::Literal));
  CHECK_FALSE(r.pass());
  CHECK_FALSE(r.findings.empty());
}

TEST_CASE("curvature audit is reproducible and within bounds") {
  const VerificationReport a = curvature_audit(ModelParams{}, 10, 5);
  const VerificationReport b = curvature_audit(ModelParams{}, 10, 5);
  CHECK(a.pass());
  CHECK(a.to_json().dump() == b.to_json().dump());
  REQUIRE(a.orientation.has_value());
  CHECK(*a.orientation == -1);
}

TEST_CASE("scenario documents are deterministic") {
  const auto doc = [] {
    return verification_document("thm3", 42, run_scenario("thm3", 42)).dump(2);
  };
  const std::string first = doc();
  CHECK(first == doc());
  const nlohmann::json j = nlohmann::json::parse(first);
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["pass"] == true);
  CHECK(j["seed"] == 42);
  CHECK(j["reports"].size() >= 2);
  CHECK(verification_document("thm3", 7, run_scenario("thm3", 7)).dump(2) != first);
  CHECK_THROWS_AS(run_scenario("thm7", 42), ConfigError);
}
