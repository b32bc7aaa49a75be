#include "taubnut/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace taubnut {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Axis: return "AxisError";
    case ErrorKind::Degenerate: return "DegenerateError";
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::NotAGeodesic: return "NotAGeodesic";
  }
  return "Error";
}

using namespace coord;

const std::array<ChristoffelIndex, 15> kChristoffelNonzero = {{
    {Tau, Tau, R},
    {Tau, Tau, Theta},
    {Tau, Phi, R},
    {Tau, Theta, Phi},
    {R, Tau, Tau},
    {R, Tau, Phi},
    {R, R, R},
    {R, Theta, Theta},
    {R, Phi, Phi},
    {Theta, Tau, Phi},
    {Theta, Theta, R},
    {Theta, Phi, Phi},
    {Phi, Tau, Theta},
    {Phi, Phi, R},
    {Phi, Theta, Phi},
}};

void ModelParams::validate() const {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ConfigError(fmt::format("n must be positive and finite, got {}", n));
  }
  if (!(fd_step > 0.0 && fd_step < 1e-2)) {
    throw ConfigError(fmt::format("fd_step must lie in (0, 1e-2), got {}", fd_step));
  }
  if (!(axis_guard > 0.0 && axis_guard < std::numbers::pi / 4)) {
    throw ConfigError(fmt::format("axis_guard must lie in (0, pi/4), got {}", axis_guard));
  }
}

void require_domain(const ModelParams& params, const Point& p) {
  if (!std::isfinite(p.tau) || !std::isfinite(p.theta) || !std::isfinite(p.phi) ||
      !std::isfinite(p.r)) {
    throw DomainError("non-finite coordinate");
  }
  if (!(p.r > params.n)) {
    throw DomainError(fmt::format("r = {} must exceed n = {}", p.r, params.n));
  }
}

void require_off_axis(const ModelParams& params, const Point& p) {
  if (!(p.theta > params.axis_guard && p.theta < std::numbers::pi - params.axis_guard)) {
    throw AxisError(fmt::format("theta = {} inside the axis guard band of width {}", p.theta,
                                params.axis_guard));
  }
}

MetricTensor metric_at(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  const double n = params.n;
  const double r = p.r;
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double lapse = (r - n) / (r + n);

  MetricTensor g;
  auto& m = g.components;
  m[Tau][Tau] = lapse;
  m[Tau][Phi] = m[Phi][Tau] = 2.0 * n * c * lapse;
  m[Phi][Phi] = 4.0 * n * n * c * c * lapse + (r * r - n * n) * s * s;
  m[R][R] = 1.0 / lapse;
  m[Theta][Theta] = r * r - n * n;
  return g;
}

MetricTensor inverse_metric_at(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  require_off_axis(params, p);
  const double n = params.n;
  const double r = p.r;
  const double c = std::cos(p.theta);
  const double s2 = std::sin(p.theta) * std::sin(p.theta);
  const double area = r * r - n * n;

  MetricTensor gi;
  auto& m = gi.components;
  m[Tau][Tau] = 4.0 * n * n * c * c / (area * s2) + (r + n) / (r - n);
  m[Tau][Phi] = m[Phi][Tau] = -2.0 * n * c / (area * s2);
  m[Phi][Phi] = 1.0 / (area * s2);
  m[R][R] = (r - n) / (r + n);
  m[Theta][Theta] = 1.0 / area;
  return gi;
}

ChristoffelTable christoffel_at(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  require_off_axis(params, p);
  const double n = params.n;
  const double r = p.r;
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double area = r * r - n * n;
  const double rn = r + n;
  const double rn2 = rn * rn;
  const double rn3 = rn2 * rn;

  ChristoffelTable G;
  G.set(Tau, Tau, R, n / area);
  G.set(Tau, Tau, Theta, 2.0 * n * n * c / (rn2 * s));
  G.set(Tau, Phi, R, -2.0 * n * c / rn);
  G.set(Tau, Phi, Theta,
        (4.0 * n * n * n * c * c - n * s * s * rn2 - 2.0 * n * rn2 * c * c) / (rn2 * s));

  G.set(R, Tau, Tau, -n * (r - n) / rn3);
  G.set(R, Tau, Phi, -2.0 * n * n * (r - n) * c / rn3);
  G.set(R, R, R, -n / area);
  G.set(R, Theta, Theta, -r * (r - n) / rn);
  G.set(R, Phi, Phi, -(4.0 * n * n * n * c * c / rn2 + r * s * s) * (r - n) / rn);

  G.set(Theta, Tau, Phi, n * s / rn2);
  G.set(Theta, R, Theta, r / area);
  G.set(Theta, Phi, Phi, 4.0 * n * n * c * s / rn2 - s * c);

  G.set(Phi, Tau, Theta, -n / (rn2 * s));
  G.set(Phi, Phi, R, r / area);
  G.set(Phi, Phi, Theta, -2.0 * n * n * c / (rn2 * s) + c / s);
  return G;
}

FrameBasis frame_at(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  const double n = params.n;
  const double r = p.r;
  const double radius = std::sqrt(r * r - n * n);
  const double lapse = std::sqrt((r - n) / (r + n));
  const double ca = std::cos(p.tau / (2.0 * n));
  const double sa = std::sin(p.tau / (2.0 * n));
  const double s = std::sin(p.theta);

  FrameBasis e;
  e.rows[0][R] = 1.0 / lapse;
  e.rows[1][Theta] = radius * ca;
  e.rows[1][Phi] = radius * sa * s;
  e.rows[2][Theta] = -radius * sa;
  e.rows[2][Phi] = radius * ca * s;
  e.rows[3][Tau] = lapse;
  e.rows[3][Phi] = lapse * 2.0 * n * std::cos(p.theta);
  return e;
}

Vec4 fd_steps(const ModelParams& params, const Point& p) {
  const double h = params.fd_step;
  return {h * params.n, h, h, h * std::min(p.r - params.n, params.n)};
}

namespace {

Point shifted(const Point& p, std::size_t axis, double delta) {
  Vec4 x = p.as_array();
  x[axis] += delta;
  return Point::from_array(x);
}

void require_stencil(const Point& p, const Vec4& steps) {
  if (!(p.theta - steps[Theta] > 0.0 && p.theta + steps[Theta] < std::numbers::pi)) {
    throw DomainError(fmt::format("theta stencil around {} leaves (0, pi)", p.theta));
  }
}

}  // namespace

ChristoffelTable christoffel_from_metric(const MetricField& metric, const Point& p,
                                         const Vec4& steps) {
  require_stencil(p, steps);

  // dg[k][i][j] = d_k g_ij
  std::array<Matrix4, 4> dg{};
  for (std::size_t k = 0; k < 4; ++k) {
    const MetricTensor plus = metric(shifted(p, k, steps[k]));
    const MetricTensor minus = metric(shifted(p, k, -steps[k]));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        dg[k][i][j] = (plus(i, j) - minus(i, j)) / (2.0 * steps[k]);
      }
    }
  }

  const MetricTensor g = metric(p);
  Eigen::Matrix4d gm;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      gm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(i, j);
    }
  }
  const Eigen::Matrix4d ginv = gm.inverse();

  ChristoffelTable G;
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t nn = m; nn < 4; ++nn) {
        double sum = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
          sum += ginv(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(s)) *
                 (dg[m][s][nn] + dg[nn][s][m] - dg[s][m][nn]);
        }
        G.set(l, m, nn, 0.5 * sum);
      }
    }
  }
  return G;
}

ChristoffelTable christoffel_fd_oracle(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  const Vec4 steps = fd_steps(params, p);
  if (!(p.r - steps[R] > params.n)) {
    throw DomainError("r stencil crosses r = n");
  }
  return christoffel_from_metric(
      [&params](const Point& q) { return metric_at(params, q); }, p, steps);
}

}  // namespace taubnut
