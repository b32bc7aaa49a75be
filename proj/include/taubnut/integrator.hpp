#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "taubnut/geometry.hpp"

namespace taubnut {

struct PhaseState {
  Point point;
  // (dtau/dt, dtheta/dt, dphi/dt, dr/dt) with respect to the affine parameter t.
  Vec4 velocity{};

  std::array<double, 8> as_array() const;
  static PhaseState from_array(const std::array<double, 8>& y);
};

// (dx/dt, d^2x/dt^2) in the (tau, theta, phi, r) order.
using StateDerivative = std::array<double, 8>;

// Evaluates the geodesic system. The 1/sin(theta) terms only enter when dtau/dt or
// dphi/dt is nonzero, so purely meridional motion is allowed across the axis;
// otherwise theta must be outside the guard band (AxisError).
StateDerivative geodesic_rhs(const ModelParams& params, const PhaseState& s);

struct KillingCharges {
  double p_tau = 0.0;
  double p_phi = 0.0;
};

KillingCharges killing_charges(const ModelParams& params, const PhaseState& s);

// g_{mu nu} xdot^mu xdot^nu
double norm(const ModelParams& params, const PhaseState& s);

struct IntegrationConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double t_end = 10.0;
  std::size_t max_steps = 1'000'000;
  // Integration stops once r <= n (1 + r_floor_rel).
  double r_floor_rel = 1e-6;
  // Output abscissae; empty means one sample per accepted step.
  std::vector<double> sample_grid;

  // Throws ConfigError.
  void validate() const;
};

enum class Termination { Horizon, SingularityApproach, AxisApproach, StepBudget };

std::string_view termination_name(Termination t);
Termination termination_from_name(std::string_view name);

struct Sample {
  double t = 0.0;
  PhaseState state;
  double p_tau = 0.0;
  double p_phi = 0.0;
  double norm = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  Termination termination = Termination::Horizon;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

Sample make_sample(const ModelParams& params, double t, const PhaseState& s);

// Adaptive Dormand-Prince 5(4) integration of the geodesic system with PI step
// control, dense output on `sample_grid` and root-located stopping events.
// A start with r <= n (1 + r_floor_rel) returns a one-sample trajectory that
// terminated with SingularityApproach.
Trajectory integrate(const ModelParams& params, const PhaseState& s0,
                     const IntegrationConfig& cfg);

// Exact radial geodesic through the removable singularity r = n, sampled at
// `times`: incoming for t < t1, outgoing for t > t1, r(t1) = n. theta, phi and
// tau stay at `base`. Throws DegenerateError for r1 == 0.
Trajectory radial_passthrough(const ModelParams& params, double t1, double r1,
                              const std::vector<double>& times, const Point& base = {});

}  // namespace taubnut
