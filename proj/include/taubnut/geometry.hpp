#pragma once

// Self-dual Taub-NUT geometry in coordinates (tau, theta, phi, r):
//
//   ds^2 = (r-n)/(r+n) (dtau + 2n cos(theta) dphi)^2
//        + (r^2-n^2) (dtheta^2 + sin^2(theta) dphi^2) + (r+n)/(r-n) dr^2
//
// Every index in this library follows the order (tau, theta, phi, r).

#include <array>
#include <cstddef>
#include <functional>
#include <numbers>

#include "taubnut/errors.hpp"

namespace taubnut {

namespace coord {
inline constexpr std::size_t Tau = 0;
inline constexpr std::size_t Theta = 1;
inline constexpr std::size_t Phi = 2;
inline constexpr std::size_t R = 3;
inline constexpr std::array<const char*, 4> kNames = {"tau", "theta", "phi", "r"};
}  // namespace coord

using Vec4 = std::array<double, 4>;
using Matrix4 = std::array<std::array<double, 4>, 4>;

struct ModelParams {
  double n = 1.0;
  // Relative step of the finite-difference oracles.
  double fd_step = 1e-4;
  // Half-width of the excluded band around theta = 0 and theta = pi.
  double axis_guard = 1e-3;

  // Throws ConfigError.
  void validate() const;
};

struct Point {
  double tau = 0.0;
  double theta = std::numbers::pi / 2;
  double phi = 0.0;
  double r = 2.0;

  Vec4 as_array() const { return {tau, theta, phi, r}; }
  static Point from_array(const Vec4& x) { return {x[0], x[1], x[2], x[3]}; }
};

struct MetricTensor {
  Matrix4 components{};

  double operator()(std::size_t i, std::size_t j) const { return components[i][j]; }
};

// Gamma^l_{mn}; the lower pair is symmetric by construction.
class ChristoffelTable {
 public:
  double operator()(std::size_t l, std::size_t m, std::size_t n) const {
    return data_[l][m][n];
  }
  void set(std::size_t l, std::size_t m, std::size_t n, double value) {
    data_[l][m][n] = value;
    data_[l][n][m] = value;
  }

 private:
  std::array<Matrix4, 4> data_{};
};

struct ChristoffelIndex {
  std::size_t upper;
  std::size_t lower_a;
  std::size_t lower_b;
};

// The structurally nonzero entries (lower_a <= lower_b) of the closed-form table.
extern const std::array<ChristoffelIndex, 15> kChristoffelNonzero;

// rows[a][mu] is the dx^mu component of omega^a.
struct FrameBasis {
  std::array<Vec4, 4> rows{};
};

// Throws DomainError unless r > n and all coordinates are finite.
void require_domain(const ModelParams& params, const Point& p);
// Throws AxisError when theta is inside the guarded band.
void require_off_axis(const ModelParams& params, const Point& p);

MetricTensor metric_at(const ModelParams& params, const Point& p);
MetricTensor inverse_metric_at(const ModelParams& params, const Point& p);
ChristoffelTable christoffel_at(const ModelParams& params, const Point& p);
FrameBasis frame_at(const ModelParams& params, const Point& p);

// Per-coordinate central-difference steps: fd_step scaled by n for tau,
// by one radian for the angles and by min(r - n, n) for r.
Vec4 fd_steps(const ModelParams& params, const Point& p);

using MetricField = std::function<MetricTensor(const Point&)>;
using ChristoffelField = std::function<ChristoffelTable(const Point&)>;

// Gamma^l_{mn} = 1/2 g^{ls} (d_m g_{sn} + d_n g_{sm} - d_s g_{mn}) with central
// differences of `metric` and a numerical inverse at p.
ChristoffelTable christoffel_from_metric(const MetricField& metric, const Point& p,
                                         const Vec4& steps);

// Independent check of christoffel_at built only on metric_at.
ChristoffelTable christoffel_fd_oracle(const ModelParams& params, const Point& p);

}  // namespace taubnut
