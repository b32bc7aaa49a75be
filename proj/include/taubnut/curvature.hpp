#pragma once

#include <array>

#include "taubnut/geometry.hpp"

namespace taubnut {

// R^a_{bcd}, stored with the first (upper) index outermost.
class RiemannTensor {
 public:
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[((a * 4 + b) * 4 + c) * 4 + d];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return data_[((a * 4 + b) * 4 + c) * 4 + d];
  }

 private:
  std::array<double, 256> data_{};
};

// R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb},
// with central differences of `christoffel` along each coordinate.
RiemannTensor riemann_from_christoffel(const ChristoffelField& christoffel, const Point& p,
                                       const Vec4& steps);

// R_{bd} = R^a_{bad}
Matrix4 ricci_from_riemann(const RiemannTensor& riemann);

double max_abs(const Matrix4& m);

// Ricci tensor from finite differences of the closed-form Christoffel symbols.
Matrix4 ricci_fd(const ModelParams& params, const Point& p);

// Ricci tensor of an arbitrary metric field: finite-difference Christoffels,
// then finite-difference curvature. Used to probe the oracle's sensitivity.
Matrix4 ricci_of_metric(const MetricField& metric, const Point& p, const Vec4& steps);

// Fully covariant Riemann tensor in the orthonormal frame of frame_at.
RiemannTensor frame_riemann(const ModelParams& params, const Point& p);

// With the frame rows in their listed order and eps_{0123} = +1 the curvature
// satisfies R = -*R; the duality sign is fixed to -1 once for the whole library.
inline constexpr int kFrameOrientation = -1;

struct DualityProjection {
  double riemann_max = 0.0;    // max |R_abcd|
  double self_dual = 0.0;      // max |R - s *R| for s = kFrameOrientation
  double anti_self_dual = 0.0; // max |R + s *R|
};

DualityProjection duality_projection(const ModelParams& params, const Point& p);

// max |R_abcd - orientation * 1/2 eps_ab^ef R_efcd|
double self_duality_residual(const ModelParams& params, const Point& p,
                             int orientation = kFrameOrientation);

}  // namespace taubnut
