#include "taubnut/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "taubnut/analytic.hpp"

namespace taubnut {

using State = std::array<double, 8>;

std::array<double, 8> PhaseState::as_array() const {
  return {point.tau, point.theta, point.phi, point.r,
          velocity[0], velocity[1], velocity[2], velocity[3]};
}

PhaseState PhaseState::from_array(const std::array<double, 8>& y) {
  return {{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
}

namespace {

// The four geodesic equations, term by term, without domain checks. Terms
// carrying 1/sin(theta) are skipped when both dtau and dphi vanish.
State geodesic_kernel(double n, const State& y) {
  const double theta = y[1];
  const double r = y[3];
  const double dtau = y[4];
  const double dtheta = y[5];
  const double dphi = y[6];
  const double dr = y[7];

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double area = r * r - n * n;
  const double rn = r + n;
  const double rn2 = rn * rn;
  const double rn3 = rn2 * rn;
  const double lapse = (r - n) / rn;

  double ddtau = -(2.0 * n / area) * dtau * dr + (4.0 * n * c / rn) * dphi * dr;
  double ddphi = -(2.0 * r / area) * dphi * dr;
  if (dtau != 0.0 || dphi != 0.0) {
    ddtau -= (4.0 * n * n * c / (rn2 * s)) * dtau * dtheta +
             2.0 * (4.0 * n * n * n * c * c - n * s * s * rn2 - 2.0 * n * rn2 * c * c) /
                 (rn2 * s) * dphi * dtheta;
    ddphi -= 2.0 * (-2.0 * n * n * c / (rn2 * s) + c / s) * dphi * dtheta -
             (2.0 * n / (rn2 * s)) * dtau * dtheta;
  }
  const double ddtheta = -(2.0 * r / area) * dr * dtheta -
                         (4.0 * n * n * c * s / rn2 - s * c) * dphi * dphi -
                         (2.0 * n * s / rn2) * dtau * dphi;
  const double ddr = (n / area) * dr * dr + (n * (r - n) / rn3) * dtau * dtau +
                     r * lapse * dtheta * dtheta +
                     (4.0 * n * n * n * c * c / rn2 + r * s * s) * lapse * dphi * dphi +
                     (4.0 * n * n * (r - n) * c / rn3) * dtau * dphi;

  return {dtau, dtheta, dphi, dr, ddtau, ddtheta, ddphi, ddr};
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Step {
  double t0 = 0.0;
  double h = 0.0;
  State y0{};
  State y1{};
  std::array<State, 5> cont{};

  State at(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State y{};
    for (std::size_t i = 0; i < 8; ++i) {
      y[i] = cont[0][i] +
             s * (cont[1][i] + s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i])));
    }
    return y;
  }
};

class DormandPrince {
 public:
  DormandPrince(double n, const IntegrationConfig& cfg) : n_(n), cfg_(cfg) {}

  State rhs(const State& y) const { return geodesic_kernel(n_, y); }

  double error_norm(const State& y0, const State& y1, const State& err) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double q = err[i] / sc;
      sum += q * q;
    }
    return std::sqrt(sum / 8.0);
  }

  double initial_step(const State& y0, const State& f0, double h_max) const {
    double dnf = 0.0;
    double dny = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y0[i]);
      dnf += (f0[i] / sc) * (f0[i] / sc);
      dny += (y0[i] / sc) * (y0[i] / sc);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, h_max);
    State y1{};
    for (std::size_t i = 0; i < 8; ++i) y1[i] = y0[i] + h * f0[i];
    const State f1 = rhs(y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y0[i]);
      der2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, h_max});
  }

  // One trial step; k1 = f(y0) on entry, on success k7 = f(y1).
  double attempt(double t0, double h, const State& y0, const State& k1, Step& step,
                 State& k7) const {
    State tmp{};
    auto stage = [&](std::initializer_list<std::pair<double, const State*>> terms) {
      for (std::size_t i = 0; i < 8; ++i) {
        double acc = 0.0;
        for (const auto& [a, k] : terms) acc += a * (*k)[i];
        tmp[i] = y0[i] + h * acc;
      }
      return rhs(tmp);
    };
    const State k2 = stage({{a21, &k1}});
    const State k3 = stage({{a31, &k1}, {a32, &k2}});
    const State k4 = stage({{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const State k5 = stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const State k6 = stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    State y1{};
    for (std::size_t i = 0; i < 8; ++i) {
      y1[i] = y0[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    k7 = rhs(y1);

    State err{};
    for (std::size_t i = 0; i < 8; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double e = error_norm(y0, y1, err);

    step.t0 = t0;
    step.h = h;
    step.y0 = y0;
    step.y1 = y1;
    for (std::size_t i = 0; i < 8; ++i) {
      const double ydiff = y1[i] - y0[i];
      const double bspl = h * k1[i] - ydiff;
      step.cont[0][i] = y0[i];
      step.cont[1][i] = ydiff;
      step.cont[2][i] = bspl;
      step.cont[3][i] = ydiff - h * k7[i] - bspl;
      step.cont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                             d7 * k7[i]);
    }
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  }

 private:
  double n_;
  const IntegrationConfig& cfg_;
};

struct StopEvent {
  Termination cause;
  double t;
};

double singularity_margin(double n, const IntegrationConfig& cfg, const State& y) {
  return y[3] - n * (1.0 + cfg.r_floor_rel);
}

double axis_margin(const ModelParams& params, const State& y) {
  return std::min(y[1] - params.axis_guard, std::numbers::pi - params.axis_guard - y[1]);
}

bool axis_active(const State& y) { return y[4] != 0.0 || y[6] != 0.0; }

// Earliest stopping event inside an accepted step, located on the dense output.
std::optional<StopEvent> locate_event(const ModelParams& params, const IntegrationConfig& cfg,
                                      const Step& step) {
  const double t1 = step.t0 + step.h;
  auto locate = [&](auto&& margin) {
    auto f = [&](double t) { return margin(step.at(t)); };
    const double f0 = margin(step.y0);
    const double f1 = margin(step.y1);
    if (f1 > 0.0) return t1 + 1.0;
    if (f0 <= 0.0) return step.t0;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
    std::uintmax_t iters = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(f, step.t0, t1, f0, f1, tol, iters);
    // Report the side where the margin has just been reached.
    return f(a) <= 0.0 ? a : b;
  };

  std::optional<StopEvent> event;
  const double t_sing = locate([&](const State& y) { return singularity_margin(params.n, cfg, y); });
  if (t_sing <= t1) event = StopEvent{Termination::SingularityApproach, t_sing};
  if (axis_active(step.y0)) {
    const double t_axis = locate([&](const State& y) { return axis_margin(params, y); });
    if (t_axis <= t1 && (!event || t_axis < event->t)) {
      event = StopEvent{Termination::AxisApproach, t_axis};
    }
  }
  return event;
}

}  // namespace

StateDerivative geodesic_rhs(const ModelParams& params, const PhaseState& s) {
  params.validate();
  require_domain(params, s.point);
  for (double v : s.velocity) {
    if (!std::isfinite(v)) throw DomainError("non-finite velocity");
  }
  if (s.velocity[coord::Tau] != 0.0 || s.velocity[coord::Phi] != 0.0) {
    require_off_axis(params, s.point);
  }
  return geodesic_kernel(params.n, s.as_array());
}

KillingCharges killing_charges(const ModelParams& params, const PhaseState& s) {
  const MetricTensor g = metric_at(params, s.point);
  const Vec4& v = s.velocity;
  using namespace coord;
  return {g(Tau, Tau) * v[Tau] + g(Tau, Phi) * v[Phi],
          g(Phi, Tau) * v[Tau] + g(Phi, Phi) * v[Phi]};
}

double norm(const ModelParams& params, const PhaseState& s) {
  const MetricTensor g = metric_at(params, s.point);
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) sum += g(i, j) * s.velocity[i] * s.velocity[j];
  }
  return sum;
}

void IntegrationConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ConfigError(fmt::format("tolerances must be positive (abs {}, rel {})", abs_tol, rel_tol));
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError(fmt::format("t_end must be finite and nonnegative, got {}", t_end));
  }
  if (!(r_floor_rel > 0.0 && r_floor_rel < 0.5)) {
    throw ConfigError(fmt::format("r_floor_rel must lie in (0, 0.5), got {}", r_floor_rel));
  }
  if (max_steps == 0) throw ConfigError("max_steps must be positive");
  for (std::size_t i = 0; i < sample_grid.size(); ++i) {
    const double t = sample_grid[i];
    if (!(t >= 0.0 && t <= t_end)) {
      throw ConfigError(fmt::format("sample time {} outside [0, t_end]", t));
    }
    if (i > 0 && !(t > sample_grid[i - 1])) {
      throw ConfigError("sample_grid must be strictly increasing");
    }
  }
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Horizon: return "Horizon";
    case Termination::SingularityApproach: return "SingularityApproach";
    case Termination::AxisApproach: return "AxisApproach";
    case Termination::StepBudget: return "StepBudget";
  }
  return "Horizon";
}

Termination termination_from_name(std::string_view name) {
  for (Termination t : {Termination::Horizon, Termination::SingularityApproach,
                        Termination::AxisApproach, Termination::StepBudget}) {
    if (termination_name(t) == name) return t;
  }
  throw ConfigError(fmt::format("unknown termination '{}'", name));
}

Sample make_sample(const ModelParams& params, double t, const PhaseState& s) {
  const KillingCharges q = killing_charges(params, s);
  return {t, s, q.p_tau, q.p_phi, norm(params, s)};
}

Trajectory integrate(const ModelParams& params, const PhaseState& s0,
                     const IntegrationConfig& cfg) {
  params.validate();
  cfg.validate();
  require_domain(params, s0.point);
  for (double v : s0.velocity) {
    if (!std::isfinite(v)) throw DomainError("non-finite velocity");
  }

  Trajectory traj;
  State y = s0.as_array();
  const bool use_grid = !cfg.sample_grid.empty();
  std::size_t next_grid = 0;
  auto emit = [&](double t, const State& state) {
    traj.samples.push_back(make_sample(params, t, PhaseState::from_array(state)));
  };

  if (singularity_margin(params.n, cfg, y) <= 0.0) {
    emit(0.0, y);
    traj.termination = Termination::SingularityApproach;
    return traj;
  }
  if (axis_active(y) && axis_margin(params, y) <= 0.0) {
    emit(0.0, y);
    traj.termination = Termination::AxisApproach;
    return traj;
  }

  const bool at_rest = std::all_of(s0.velocity.begin(), s0.velocity.end(),
                                   [](double v) { return v == 0.0; });
  if (at_rest) {
    if (use_grid) {
      for (double t : cfg.sample_grid) emit(t, y);
    } else {
      emit(0.0, y);
    }
    traj.termination = Termination::Horizon;
    return traj;
  }

  if (!use_grid) emit(0.0, y);
  while (use_grid && next_grid < cfg.sample_grid.size() && cfg.sample_grid[next_grid] <= 0.0) {
    emit(cfg.sample_grid[next_grid++], y);
  }
  if (cfg.t_end == 0.0) return traj;

  const DormandPrince dp(params.n, cfg);
  State k1 = dp.rhs(y);
  double t = 0.0;
  double h = dp.initial_step(y, k1, cfg.t_end);

  constexpr double kSafe = 0.9;
  constexpr double kBeta = 0.04;
  constexpr double kExpo = 0.2 - kBeta * 0.75;
  constexpr double kFacMin = 0.2;  // largest shrink 1/5
  constexpr double kFacMax = 10.0;  // largest growth
  double fac_old = 1e-4;
  bool last_rejected = false;

  Step step;
  State k7{};
  while (true) {
    if (traj.accepted_steps + traj.rejected_steps >= cfg.max_steps) {
      if (use_grid || traj.samples.empty() || traj.samples.back().t != t) emit(t, y);
      traj.termination = Termination::StepBudget;
      return traj;
    }
    bool last = false;
    if (t + h >= cfg.t_end || t + 1.01 * h >= cfg.t_end) {
      h = cfg.t_end - t;
      last = true;
    }
    const double err = dp.attempt(t, h, y, k1, step, k7);
    const double fac11 = std::pow(err, kExpo);

    if (err <= 1.0) {
      ++traj.accepted_steps;
      const std::optional<StopEvent> event = locate_event(params, cfg, step);
      const double t_new = event ? event->t : (last ? cfg.t_end : t + h);
      if (use_grid) {
        while (next_grid < cfg.sample_grid.size() && cfg.sample_grid[next_grid] <= t_new) {
          const double tg = cfg.sample_grid[next_grid++];
          emit(tg, tg == t + h ? step.y1 : step.at(tg));
        }
      }
      if (event) {
        const State y_event = event->t == t + h ? step.y1 : step.at(event->t);
        if (!use_grid || traj.samples.empty() || traj.samples.back().t < event->t) {
          emit(event->t, y_event);
        }
        traj.termination = event->cause;
        return traj;
      }
      t = t_new;
      y = step.y1;
      k1 = k7;
      if (!use_grid) emit(t, y);
      if (last) {
        traj.termination = Termination::Horizon;
        return traj;
      }
      double fac = fac11 / std::pow(fac_old, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      fac_old = std::max(err, 1e-4);
      last_rejected = false;
      h = h_new;
    } else {
      ++traj.rejected_steps;
      const double shrink = std::isfinite(fac11) ? std::min(1.0 / kFacMin, fac11 / kSafe)
                                                 : 1.0 / kFacMin;
      h = h / shrink;
      last_rejected = true;
    }
    if (!(h > 1e-14 * std::max(1.0, std::abs(t)))) {
      throw DomainError(fmt::format("step size underflow at t = {}", t));
    }
  }
}

Trajectory radial_passthrough(const ModelParams& params, double t1, double r1,
                              const std::vector<double>& times, const Point& base) {
  params.validate();
  if (r1 == 0.0) throw DegenerateError("r1 = 0: no radial motion");
  const double n = params.n;
  const double speed = std::abs(r1);

  FamilyConstants outgoing;
  outgoing.family = Family::Radial;
  outgoing.eps = 1;
  outgoing.r1 = speed;
  outgoing.t1 = t1;
  FamilyConstants incoming = outgoing;
  incoming.eps = -1;

  Trajectory traj;
  traj.termination = Termination::Horizon;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (i > 0 && !(t > times[i - 1])) throw ConfigError("times must be strictly increasing");
    Sample sample;
    sample.t = t;
    sample.state.point = base;
    if (t == t1) {
      // r = n: coordinate speed vanishes while the frame speed stays |r1|.
      sample.state.point.r = n;
      sample.norm = speed * speed;
    } else {
      const FamilyConstants& branch = t < t1 ? incoming : outgoing;
      const double r = invert_t_of_r(branch, params, t, CurveMode::Aligned);
      sample.state.point.r = r;
      sample.state.velocity[coord::R] = branch.eps * speed * std::sqrt((r - n) / (r + n));
      if (r > n) {
        sample.norm = norm(params, sample.state);
      } else {
        sample.norm = speed * speed;
      }
    }
    traj.samples.push_back(sample);
  }
  return traj;
}

}  // namespace taubnut
