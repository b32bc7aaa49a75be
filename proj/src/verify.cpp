#include "taubnut/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>

#include <fmt/format.h>

#include "taubnut/curvature.hpp"
#include "taubnut/io.hpp"

namespace taubnut {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> uniform_grid(double a, double b, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 1) grid.back() = b;
  return grid;
}

// Values of each coordinate along the closed form, missing ones constant.
std::array<std::optional<double>, 4> family_coords(const FamilyPoint& p) {
  std::array<std::optional<double>, 4> out;
  out[coord::Tau] = p.tau;
  out[coord::Theta] = p.theta;
  out[coord::Phi] = p.phi;
  return out;
}

struct Deviations {
  double t = 0.0;
  Vec4 coords{};  // r deviation lives in coords[coord::R]
  double p_tau = 0.0;
  double p_phi = 0.0;
  double norm = 0.0;
};

// Deviations of a trajectory from one evaluation mode of the closed form,
// both measured from their values at the first sample.
Deviations measure(const ModelParams& params, const FamilyConstants& c, CurveMode mode,
                   const Trajectory& traj) {
  Deviations dev;
  const Sample& first = traj.samples.front();
  const double r0 = first.state.point.r;
  const FamilyPoint ref = evaluate_family(params, c, r0, mode);
  const auto ref_coords = family_coords(ref);
  const Vec4 x0 = first.state.point.as_array();

  for (const Sample& s : traj.samples) {
    const double r = s.state.point.r;
    const FamilyPoint ana = evaluate_family(params, c, r, mode);
    const auto ana_coords = family_coords(ana);
    const Vec4 x = s.state.point.as_array();

    dev.t = std::max(dev.t, std::abs(s.t - (ana.t - ref.t)));
    const double r_ana = invert_t_of_r(c, params, ref.t + s.t, mode);
    dev.coords[coord::R] = std::max(dev.coords[coord::R], std::abs(r - r_ana));
    for (std::size_t i : {coord::Tau, coord::Theta, coord::Phi}) {
      double expected = 0.0;
      if (ana_coords[i]) expected = *ana_coords[i] - *ref_coords[i];
      dev.coords[i] = std::max(dev.coords[i], std::abs((x[i] - x0[i]) - expected));
    }
    dev.p_tau = std::max(dev.p_tau, std::abs(s.p_tau - first.p_tau));
    dev.p_phi = std::max(dev.p_phi, std::abs(s.p_phi - first.p_phi));
    dev.norm = std::max(dev.norm, std::abs(s.norm - first.norm));
  }
  return dev;
}

void record_deviations(VerificationReport& report, const std::string& prefix,
                       const Deviations& dev, double tolerance) {
  report.check(prefix + "t", dev.t, tolerance);
  for (std::size_t i = 0; i < 4; ++i) {
    report.check(prefix + coord::kNames[i], dev.coords[i], tolerance);
  }
}

void record_drifts(VerificationReport& report, const Deviations& dev, double tolerance) {
  report.check("drift.p_tau", dev.p_tau, tolerance);
  report.check("drift.p_phi", dev.p_phi, tolerance);
  report.check("drift.norm", dev.norm, tolerance);
}

struct ComparisonRun {
  FamilyConstants family;
  double r0 = 0.0;
  double r_end = 0.0;
  Trajectory trajectory;
};

// Outgoing integration from R (1 + delta) to r_end, sampled on a uniform grid
// in t whose end is the closed-form travel time.
ComparisonRun run_outgoing(const FamilyConstants& family, const ModelParams& params,
                           const CompareConfig& cfg) {
  params.validate();
  if (family.family == Family::Generic || family.family == Family::StationaryPoint) {
    throw ConfigError(fmt::format("no closed form to compare for {}", family_tag(family.family)));
  }
  if (!(cfg.start_offset > 0.0) || cfg.samples < 2) {
    throw ConfigError("comparison needs start_offset > 0 and at least two samples");
  }
  ComparisonRun run;
  run.family = family;
  run.family.eps = 1;
  run.family.validate();
  const double R = turning_radius(run.family, params).value;
  run.r0 = R * (1.0 + cfg.start_offset);
  run.r_end = cfg.r_max_over_n * params.n;
  if (!(run.r_end > run.r0)) {
    throw ConfigError(fmt::format("comparison range [{}, {}] is empty", run.r0, run.r_end));
  }
  const CurveMode nat = natural_mode(run.family.family);
  const double span = evaluate_family(params, run.family, run.r_end, nat).t -
                      evaluate_family(params, run.family, run.r0, nat).t;

  IntegrationConfig icfg = cfg.integration;
  icfg.t_end = span;
  icfg.sample_grid = uniform_grid(0.0, span, cfg.samples);
  const PhaseState s0 = family_state_at(params, run.family, run.r0, cfg.base);
  run.trajectory = integrate(params, s0, icfg);
  return run;
}

void record_run(VerificationReport& report, const ComparisonRun& run, const ModelParams& params,
                const CompareConfig& cfg) {
  report.family = std::string(family_tag(run.family.family));
  report.parameters = family_to_json(run.family, params.n);
  report.parameters["r0"] = run.r0;
  report.parameters["r_end"] = run.r_end;
  report.parameters["tolerance"] = cfg.integration.rel_tol;
  const bool horizon = run.trajectory.termination == Termination::Horizon;
  report.check("termination", horizon ? 0.0 : 1.0, 0.0);
  report.check("samples", static_cast<double>(run.trajectory.samples.size()),
               static_cast<double>(cfg.samples), Check::Bound::Lower);
  if (!horizon) {
    report.findings.push_back(
        {"termination", fmt::format("integration stopped early: {}",
                                    termination_name(run.trajectory.termination))});
  }
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

bool Check::pass() const { return kind == Bound::Upper ? value <= bound : value >= bound; }

void VerificationReport::check(std::string name, double value, double bound, Check::Bound kind) {
  checks.push_back({std::move(name), value, bound, kind});
}

void VerificationReport::metric(std::string name, double value) {
  metrics.emplace_back(std::move(name), value);
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["family"] = family;
  j["parameters"] = parameters;
  j["pass"] = pass();
  if (orientation) j["orientation"] = *orientation;
  auto& cs = j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["bound"] = c.bound;
    e["kind"] = c.kind == Check::Bound::Upper ? "max" : "min";
    e["pass"] = c.pass();
    cs.push_back(std::move(e));
  }
  auto& ms = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : metrics) ms[name] = value;
  std::vector<Finding> sorted = findings;
  std::sort(sorted.begin(), sorted.end(),
            [](const Finding& a, const Finding& b) { return a.id < b.id; });
  auto& fs = j["findings"] = nlohmann::ordered_json::array();
  for (const Finding& f : sorted) fs.push_back({{"id", f.id}, {"message", f.message}});
  return j;
}

double SeededUniform::operator()(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

VerificationReport compare_numeric_analytic(const FamilyConstants& family,
                                            const ModelParams& params,
                                            const CompareConfig& cfg) {
  const ComparisonRun run = run_outgoing(family, params, cfg);
  VerificationReport report;
  report.scenario = "compare";
  record_run(report, run, params, cfg);
  report.parameters["mode"] = std::string(mode_name(cfg.mode));
  const Deviations dev = measure(params, run.family, cfg.mode, run.trajectory);
  record_deviations(report, "deviation.", dev, cfg.tolerance);
  record_drifts(report, dev, cfg.conservation_tolerance);
  return report;
}

VerificationReport const_theta_factor_check(const FamilyConstants& family,
                                            const ModelParams& params,
                                            const CompareConfig& cfg) {
  if (family.family != Family::ConstTheta) {
    throw ConfigError("the factor check applies to thm5 only");
  }
  const ComparisonRun run = run_outgoing(family, params, cfg);
  VerificationReport report;
  report.scenario = "thm5-factor";
  record_run(report, run, params, cfg);

  const Deviations corrected = measure(params, run.family, CurveMode::Corrected, run.trajectory);
  record_deviations(report, "corrected.deviation.", corrected, cfg.tolerance);
  record_drifts(report, corrected, cfg.conservation_tolerance);

  const Deviations literal = measure(params, run.family, CurveMode::Literal, run.trajectory);
  const double literal_max =
      std::max({literal.t, literal.coords[0], literal.coords[1], literal.coords[2],
                literal.coords[3]});
  for (std::size_t i = 0; i < 4; ++i) {
    report.metric(fmt::format("literal.deviation.{}", coord::kNames[i]), literal.coords[i]);
  }
  report.metric("literal.deviation.t", literal.t);

  // Literal increments over [r0, r_end] against the corrected ones.
  const FamilyConstants& c = run.family;
  const ConstThetaCurve lit0 = thm5_curves(params, c, run.r0, CurveMode::Literal);
  const ConstThetaCurve lit1 = thm5_curves(params, c, run.r_end, CurveMode::Literal);
  const ConstThetaCurve cor0 = thm5_curves(params, c, run.r0, CurveMode::Corrected);
  const ConstThetaCurve cor1 = thm5_curves(params, c, run.r_end, CurveMode::Corrected);
  const double root2n = std::sqrt(2.0 * params.n);
  const double angle_factor = c.r1 * root2n;
  const double t_factor = c.r1 / root2n;
  const double phi_ratio = (lit1.phi - lit0.phi) / (cor1.phi - cor0.phi);
  const double t_ratio = (lit1.t - lit0.t) / (cor1.t - cor0.t);
  report.metric("expected.angle_factor", angle_factor);
  report.metric("expected.t_factor", t_factor);
  report.metric("literal.phi_increment_ratio", phi_ratio);
  report.metric("literal.t_increment_ratio", t_ratio);
  report.check("literal.phi_ratio_vs_r1_sqrt2n", relative(phi_ratio, angle_factor), 1e-9);
  report.check("literal.t_ratio_vs_r1_over_sqrt2n", relative(t_ratio, t_factor), 1e-9);
  if (std::abs(std::cos(c.theta_const)) > 1e-6) {
    const double tau_ratio = (lit1.tau - lit0.tau) / (cor1.tau - cor0.tau);
    report.metric("literal.tau_increment_ratio", tau_ratio);
    report.check("literal.tau_ratio_vs_r1_sqrt2n", relative(tau_ratio, angle_factor), 1e-9);
  }

  if (std::abs(angle_factor - 1.0) > 0.05 && std::abs(t_factor - 1.0) > 0.05) {
    report.check("literal.max_deviation", literal_max, 1e-2, Check::Bound::Lower);
  }
  report.findings.push_back(
      {"thm5-literal-factor",
       fmt::format("literal-mode thm5 curves disagree with the integrated geodesic "
                   "(max deviation {:.3e}): the printed sqrt((r-R+)(r-R-)) is sqrt(F)/(r1 "
                   "sqrt(2n)), so phi and tau increments come out scaled by r1*sqrt(2n) = {:.12g} "
                   "and t increments by r1/sqrt(2n) = {:.12g}; corrected mode max deviation "
                   "{:.3e}",
                   literal_max, angle_factor, t_factor,
                   std::max({corrected.t, corrected.coords[0], corrected.coords[1],
                             corrected.coords[2], corrected.coords[3]}))});
  return report;
}

VerificationReport radial_passthrough_check(const ModelParams& params, double r1,
                                            const CompareConfig& cfg) {
  params.validate();
  if (cfg.samples < 2) throw ConfigError("passthrough check needs at least two samples");
  const double n = params.n;
  const double speed = std::abs(r1);
  const double r_far = cfg.r_max_over_n * n;
  const double r_near = n * (1.0 + cfg.start_offset);

  FamilyConstants radial;
  radial.family = Family::Radial;
  radial.r1 = speed;
  radial.validate();
  // Closed-form time from r = n out to r along either branch.
  auto travel = [&](double r) { return thm1_t_of_r(params, radial, r, CurveMode::Aligned); };
  const double t1 = travel(r_far);

  VerificationReport report;
  report.scenario = "thm1-passthrough";
  report.family = "thm1";
  report.parameters = {{"n", n}, {"r1", speed}, {"t1", t1}, {"r_far", r_far},
                       {"r_near", r_near}, {"tolerance", cfg.integration.rel_tol}};

  auto compare = [&](const Trajectory& numeric) {
    std::vector<double> times;
    for (const Sample& s : numeric.samples) times.push_back(s.t);
    const Trajectory exact = radial_passthrough(params, t1, speed, times, cfg.base);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, std::abs(numeric.samples[i].state.point.r -
                                       exact.samples[i].state.point.r));
    }
    return worst;
  };

  // Incoming leg from r_far at t = 0 down to the integrator's floor.
  IntegrationConfig icfg = cfg.integration;
  icfg.t_end = t1;
  icfg.sample_grid = uniform_grid(0.0, t1, cfg.samples);
  PhaseState in0;
  in0.point = cfg.base;
  in0.point.r = r_far;
  in0.velocity[coord::R] = -speed * std::sqrt((r_far - n) / (r_far + n));
  Trajectory incoming = integrate(params, in0, icfg);
  report.check("incoming.termination",
               incoming.termination == Termination::SingularityApproach ? 0.0 : 1.0, 0.0);
  report.check("incoming.r", compare(incoming), 1e-8);

  // Outgoing leg from just above r = n, shifted onto the stitched clock.
  const double t_near = t1 + travel(r_near);
  const double span = t1 + t1 - t_near;
  icfg.t_end = span;
  icfg.sample_grid = uniform_grid(0.0, span, cfg.samples);
  PhaseState out0 = in0;
  out0.point.r = r_near;
  out0.velocity[coord::R] = speed * std::sqrt((r_near - n) / (r_near + n));
  Trajectory outgoing = integrate(params, out0, icfg);
  for (Sample& s : outgoing.samples) s.t += t_near;
  report.check("outgoing.termination",
               outgoing.termination == Termination::Horizon ? 0.0 : 1.0, 0.0);
  report.check("outgoing.r", compare(outgoing), 1e-8);

  // The stitched solution is symmetric about t1 and keeps the frame speed |r1|.
  std::vector<double> offsets;
  for (double d = 1e-6; d < t1; d *= 10.0) offsets.push_back(d);
  std::vector<double> times;
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) times.push_back(t1 - *it);
  for (double d : offsets) times.push_back(t1 + d);
  const Trajectory stitched = radial_passthrough(params, t1, speed, times, cfg.base);
  const std::size_t m = offsets.size();
  double asymmetry = 0.0;
  double speed_error = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Sample& before = stitched.samples[m - 1 - i];
    const Sample& after = stitched.samples[m + i];
    asymmetry = std::max(asymmetry, std::abs(before.state.point.r - after.state.point.r));
    for (const Sample* s : {&before, &after}) {
      const double r = s->state.point.r;
      if (!(r > n)) continue;
      const double frame = std::sqrt((r + n) / (r - n)) * std::abs(s->state.velocity[coord::R]);
      speed_error = std::max(speed_error, std::abs(frame - speed) / speed);
    }
  }
  report.check("stitched.asymmetry", asymmetry, 1e-10);
  report.check("stitched.frame_speed", speed_error, 1e-8);
  return report;
}

VerificationReport derivative_sweep(const FamilyConstants& family, const ModelParams& params,
                                    double r_lo, double r_hi, std::size_t samples,
                                    CurveMode mode, double tolerance) {
  params.validate();
  const double R = turning_radius(family, params).value;
  if (!(r_lo > R) || !(r_hi > r_lo) || !std::isfinite(r_hi) || samples < 2) {
    throw DomainError(fmt::format("derivative sweep range [{}, {}] must lie inside ({}, inf)",
                                  r_lo, r_hi, R));
  }
  VerificationReport report;
  report.scenario = "derivative-sweep";
  report.family = std::string(family_tag(family.family));
  report.parameters = family_to_json(family, params.n);
  report.parameters["mode"] = std::string(mode_name(mode));
  report.parameters["r_lo"] = r_lo;
  report.parameters["r_hi"] = r_hi;
  report.parameters["samples"] = samples;

  std::array<std::optional<double>, 5> worst;  // t, tau, theta, phi, r (unused)
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double r = i + 1 == samples ? r_hi : r_lo * std::pow(r_hi / r_lo, u);
    const double h = 1e-3 * (r - R);
    const FamilyPoint m2 = evaluate_family(params, family, r - 2.0 * h, mode);
    const FamilyPoint m1 = evaluate_family(params, family, r - h, mode);
    const FamilyPoint p1 = evaluate_family(params, family, r + h, mode);
    const FamilyPoint p2 = evaluate_family(params, family, r + 2.0 * h, mode);
    const FamilyPoint exact = family_derivatives(params, family, r, mode);

    auto update = [&](std::optional<double>& slot, double a2, double a1, double b1, double b2,
                      double d) {
      const double fd = (a2 - 8.0 * a1 + 8.0 * b1 - b2) / (12.0 * h);
      const double err = std::abs(fd - d) / std::max(std::abs(d), 1e-300);
      slot = std::max(slot.value_or(0.0), err);
    };
    update(worst[0], m2.t, m1.t, p1.t, p2.t, exact.t);
    const auto c_m2 = family_coords(m2), c_m1 = family_coords(m1), c_p1 = family_coords(p1),
               c_p2 = family_coords(p2), c_ex = family_coords(exact);
    for (std::size_t k : {coord::Tau, coord::Theta, coord::Phi}) {
      if (!c_ex[k]) continue;
      update(worst[k + 1], *c_m2[k], *c_m1[k], *c_p1[k], *c_p2[k], *c_ex[k]);
    }
  }
  const std::array<const char*, 4> names = {"t", "tau", "theta", "phi"};
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!worst[k]) continue;
    const std::string name = fmt::format("derivative.{}", names[k]);
    report.check(name, *worst[k], tolerance);
    if (!(*worst[k] <= tolerance)) {
      report.findings.push_back(
          {name, fmt::format("{} {}-curve: max relative derivative error {:.6e} exceeds {:.1e}",
                             report.family, names[k], *worst[k], tolerance)});
    }
  }
  return report;
}

VerificationReport curvature_audit(const ModelParams& params, std::size_t sample_count,
                                   std::uint64_t seed) {
  params.validate();
  if (sample_count < 1) throw ConfigError("curvature audit needs at least one point");
  SeededUniform draw(seed);
  struct Probe {
    double christoffel = 0.0;
    double ricci = 0.0;
    double riemann = 0.0;
    std::array<double, 2> residual{};  // orientation +1, -1
  };
  std::vector<Probe> probes(sample_count);
  for (Probe& probe : probes) {
    ModelParams local = params;
    local.n = draw(0.5, 2.0);
    Point p;
    p.r = draw(1.1 * local.n, 10.0 * local.n);
    p.theta = draw(0.2, kPi - 0.2);
    p.tau = draw(-kPi, kPi) * local.n;
    p.phi = draw(0.0, 2.0 * kPi);

    const ChristoffelTable exact = christoffel_at(local, p);
    const ChristoffelTable oracle = christoffel_fd_oracle(local, p);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t c = 0; c < 4; ++c) {
          probe.christoffel = std::max(probe.christoffel, std::abs(exact(a, b, c) - oracle(a, b, c)));
        }
      }
    }
    probe.ricci = max_abs(ricci_fd(local, p));
    const DualityProjection d = duality_projection(local, p);
    probe.riemann = d.riemann_max;
    // duality_projection measures against kFrameOrientation; map back to +/-1.
    probe.residual[0] = kFrameOrientation > 0 ? d.self_dual : d.anti_self_dual;
    probe.residual[1] = kFrameOrientation > 0 ? d.anti_self_dual : d.self_dual;
  }

  double christoffel = 0.0, ricci = 0.0;
  std::array<double, 2> worst{};
  for (const Probe& p : probes) {
    christoffel = std::max(christoffel, p.christoffel);
    ricci = std::max(ricci, p.ricci);
    for (std::size_t i = 0; i < 2; ++i) worst[i] = std::max(worst[i], p.residual[i]);
  }
  // One sign for every point: the one under which the curvature is self-dual.
  const std::size_t chosen = worst[0] <= worst[1] ? 0 : 1;
  const int orientation = chosen == 0 ? 1 : -1;
  double opposite_ratio = std::numeric_limits<double>::infinity();
  for (const Probe& p : probes) {
    opposite_ratio = std::min(opposite_ratio, p.residual[1 - chosen] / p.riemann);
  }

  VerificationReport report;
  report.scenario = "curvature";
  report.family = "none";
  report.parameters = {{"points", sample_count}, {"seed", seed}, {"fd_step", params.fd_step},
                       {"n_range", {0.5, 2.0}}, {"r_over_n_range", {1.1, 10.0}},
                       {"theta_range", {0.2, kPi - 0.2}}};
  report.orientation = orientation;
  report.check("christoffel.max_abs_difference", christoffel, 1e-6);
  report.check("ricci.max_abs", ricci, 1e-4);
  report.check("self_dual.max_residual", worst[chosen], 1e-3);
  report.check("anti_self_dual.min_relative_residual", opposite_ratio, 1e-1, Check::Bound::Lower);
  report.check("orientation.matches_library", orientation == kFrameOrientation ? 0.0 : 1.0, 0.0);
  if (orientation < 0) {
    report.findings.push_back(
        {"orientation", "with the frame in its listed order and eps_0123 = +1 the curvature "
                        "satisfies R = -*R; the duality sign is flipped to -1 globally"});
  }
  return report;
}

namespace {

constexpr std::array<std::string_view, 6> kScenarios = {"thm1", "thm2", "thm3",
                                                        "thm4", "thm5", "curvature"};

std::uint64_t stream_seed(std::uint64_t seed, std::size_t index) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
}

struct ParameterSet {
  std::string label;
  ModelParams params;
  FamilyConstants family;
};

// Meridional anchor that centres the swing over [R, r_end] on the equator.
void centre_meridional(FamilyConstants& c, const ModelParams& params, double r_end) {
  c.theta1 = 0.0;
  const double R = turning_radius(c, params).value;
  const double swing = thm4_curves(params, c, r_end, CurveMode::Aligned).angle -
                       thm4_curves(params, c, R, CurveMode::Aligned).angle;
  c.theta1 = kPi / 2.0 - swing / 2.0;
}

std::vector<ParameterSet> parameter_sets(Family family, std::uint64_t seed, double r_max_over_n) {
  SeededUniform draw(seed);
  ParameterSet ref;
  ref.label = "reference";
  ref.family.family = family;
  ParameterSet seeded;
  seeded.label = "seeded";
  seeded.family.family = family;
  seeded.params.n = draw(0.5, 2.0);
  seeded.family.r1 = draw(0.5, 2.0);
  const double k = draw(0.3, 1.5);
  const double n = seeded.params.n;
  switch (family) {
    case Family::Radial:
      ref.params.n = 0.5;
      break;
    case Family::TauRadial:
      ref.family.angular = 1.0;
      ref.family.r1 = std::sqrt(2.0);
      seeded.family.angular = std::min(k, 1.0) * seeded.family.r1;
      break;
    case Family::Equatorial:
    case Family::Meridional:
      ref.family.angular = 1.0;
      seeded.family.angular = k * n * seeded.family.r1;
      break;
    case Family::ConstTheta:
      ref.family.angular = 1.0;
      ref.family.theta_const = kPi / 3.0;
      seeded.family.angular = k * n * seeded.family.r1;
      seeded.family.theta_const = draw(0.3, kPi - 0.3);
      break;
    default:
      break;
  }
  std::vector<ParameterSet> sets = {ref, seeded};
  for (ParameterSet& s : sets) {
    if (family == Family::Meridional) centre_meridional(s.family, s.params, r_max_over_n * s.params.n);
  }
  return sets;
}

std::vector<VerificationReport> family_scenario(std::string_view tag, std::uint64_t seed) {
  const Family family = family_from_tag(tag);
  CompareConfig cfg;
  std::vector<VerificationReport> reports;
  for (const ParameterSet& set : parameter_sets(family, seed, cfg.r_max_over_n)) {
    const std::string prefix = fmt::format("{}/{}/", tag, set.label);
    auto push = [&](VerificationReport r, std::string_view kind) {
      r.scenario = prefix + std::string(kind);
      reports.push_back(std::move(r));
    };
    if (family == Family::ConstTheta) {
      push(const_theta_factor_check(set.family, set.params, cfg), "compare");
    } else {
      push(compare_numeric_analytic(set.family, set.params, cfg), "compare");
    }
    if (family == Family::Radial) {
      push(radial_passthrough_check(set.params, set.family.r1, cfg), "passthrough");
    }

    const double R = turning_radius(set.family, set.params).value;
    const double r_lo = R * 1.001;
    const double r_hi = 10.0 * set.params.n;
    push(derivative_sweep(set.family, set.params, r_lo, r_hi, 50, natural_mode(family)),
         fmt::format("derivative-{}", mode_name(natural_mode(family))));
    if (family == Family::ConstTheta) {
      // The literal t-curve is expected to miss the first-integral dt/dr by 1/(2n);
      // keep that as a finding and hold only phi and tau to the bound.
      VerificationReport lit =
          derivative_sweep(set.family, set.params, r_lo, r_hi, 50, CurveMode::Literal);
      std::vector<Check> kept;
      for (const Check& c : lit.checks) {
        if (c.name == "derivative.t") {
          lit.metric("literal.derivative.t", c.value);
          lit.metric("expected.literal_t_derivative_ratio", 1.0 / (2.0 * set.params.n));
        } else {
          kept.push_back(c);
        }
      }
      lit.checks = std::move(kept);
      push(std::move(lit), "derivative-literal");
    }
  }
  return reports;
}

}  // namespace

std::vector<VerificationReport> run_scenario(std::string_view scenario, std::uint64_t seed) {
  std::vector<std::string_view> selected;
  if (scenario == "all") {
    selected.assign(kScenarios.begin(), kScenarios.end());
  } else if (std::find(kScenarios.begin(), kScenarios.end(), scenario) != kScenarios.end()) {
    selected.push_back(scenario);
  } else {
    throw ConfigError(fmt::format("unknown scenario '{}'", scenario));
  }

  std::vector<std::future<std::vector<VerificationReport>>> jobs;
  for (std::string_view name : selected) {
    const std::size_t index =
        static_cast<std::size_t>(std::find(kScenarios.begin(), kScenarios.end(), name) -
                                 kScenarios.begin());
    const std::uint64_t s = stream_seed(seed, index);
    jobs.push_back(std::async(std::launch::async, [name, s]() {
      if (name == "curvature") {
        VerificationReport r = curvature_audit(ModelParams{}, 100, s);
        return std::vector<VerificationReport>{std::move(r)};
      }
      return family_scenario(name, s);
    }));
  }
  std::vector<VerificationReport> reports;
  for (auto& job : jobs) {
    for (VerificationReport& r : job.get()) reports.push_back(std::move(r));
  }
  return reports;
}

nlohmann::ordered_json verification_document(std::string_view scenario, std::uint64_t seed,
                                             const std::vector<VerificationReport>& reports) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["scenario"] = std::string(scenario);
  j["seed"] = seed;
  const bool pass = std::all_of(reports.begin(), reports.end(),
                                [](const VerificationReport& r) { return r.pass(); });
  j["pass"] = pass;
  auto& rs = j["reports"] = nlohmann::ordered_json::array();
  for (const VerificationReport& r : reports) rs.push_back(r.to_json());
  return j;
}

}  // namespace taubnut
