#include "taubnut/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace taubnut {

namespace {

Point shifted(const Point& p, std::size_t axis, double delta) {
  Vec4 x = p.as_array();
  x[axis] += delta;
  return Point::from_array(x);
}

// Levi-Civita symbol of a permutation of (0,1,2,3); zero on repeated indices.
int levi_civita(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const std::array<std::size_t, 4> idx = {a, b, c, d};
  int sign = 1;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

double duality_residual(const RiemannTensor& R, int orientation) {
  double worst = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t d = 0; d < 4; ++d) {
          double dual = 0.0;
          for (std::size_t e = 0; e < 4; ++e) {
            for (std::size_t f = 0; f < 4; ++f) {
              const int eps = levi_civita(a, b, e, f);
              if (eps != 0) dual += eps * R(e, f, c, d);
            }
          }
          worst = std::max(worst, std::abs(R(a, b, c, d) - orientation * 0.5 * dual));
        }
      }
    }
  }
  return worst;
}

}  // namespace

RiemannTensor riemann_from_christoffel(const ChristoffelField& christoffel, const Point& p,
                                       const Vec4& steps) {
  // dG[c] = d_c Gamma
  std::array<ChristoffelTable, 4> plus;
  std::array<ChristoffelTable, 4> minus;
  for (std::size_t c = 0; c < 4; ++c) {
    plus[c] = christoffel(shifted(p, c, steps[c]));
    minus[c] = christoffel(shifted(p, c, -steps[c]));
  }
  auto dG = [&](std::size_t c, std::size_t a, std::size_t m, std::size_t n) {
    return (plus[c](a, m, n) - minus[c](a, m, n)) / (2.0 * steps[c]);
  };
  const ChristoffelTable G = christoffel(p);

  RiemannTensor R;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t d = 0; d < 4; ++d) {
          double value = dG(c, a, d, b) - dG(d, a, c, b);
          for (std::size_t e = 0; e < 4; ++e) {
            value += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          }
          R(a, b, c, d) = value;
        }
      }
    }
  }
  return R;
}

Matrix4 ricci_from_riemann(const RiemannTensor& riemann) {
  Matrix4 ric{};
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t d = 0; d < 4; ++d) {
      for (std::size_t a = 0; a < 4; ++a) ric[b][d] += riemann(a, b, a, d);
    }
  }
  return ric;
}

double max_abs(const Matrix4& m) {
  double worst = 0.0;
  for (const auto& row : m) {
    for (double v : row) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

Matrix4 ricci_fd(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  const Vec4 steps = fd_steps(params, p);
  const RiemannTensor R = riemann_from_christoffel(
      [&params](const Point& q) { return christoffel_at(params, q); }, p, steps);
  return ricci_from_riemann(R);
}

Matrix4 ricci_of_metric(const MetricField& metric, const Point& p, const Vec4& steps) {
  const RiemannTensor R = riemann_from_christoffel(
      [&](const Point& q) { return christoffel_from_metric(metric, q, steps); }, p, steps);
  return ricci_from_riemann(R);
}

RiemannTensor frame_riemann(const ModelParams& params, const Point& p) {
  require_domain(params, p);
  const Vec4 steps = fd_steps(params, p);
  const RiemannTensor mixed = riemann_from_christoffel(
      [&params](const Point& q) { return christoffel_at(params, q); }, p, steps);
  const MetricTensor g = metric_at(params, p);

  const FrameBasis frame = frame_at(params, p);
  Eigen::Matrix4d W;
  for (Eigen::Index a = 0; a < 4; ++a) {
    for (Eigen::Index mu = 0; mu < 4; ++mu) {
      W(a, mu) = frame.rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)];
    }
  }
  // Column a of E is the vector e_a dual to omega^a.
  const Eigen::Matrix4d E = W.inverse();

  // Lower the first index, then project one slot at a time.
  RiemannTensor T;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t d = 0; d < 4; ++d) {
          double v = 0.0;
          for (std::size_t e = 0; e < 4; ++e) v += g(a, e) * mixed(e, b, c, d);
          T(a, b, c, d) = v;
        }

  auto e = [&E](std::size_t mu, std::size_t a) {
    return E(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(a));
  };
  for (int slot = 0; slot < 4; ++slot) {
    RiemannTensor next;
    for (std::size_t i0 = 0; i0 < 4; ++i0)
      for (std::size_t i1 = 0; i1 < 4; ++i1)
        for (std::size_t i2 = 0; i2 < 4; ++i2)
          for (std::size_t i3 = 0; i3 < 4; ++i3) {
            std::array<std::size_t, 4> idx = {i0, i1, i2, i3};
            const std::size_t frame_index = idx[static_cast<std::size_t>(slot)];
            double v = 0.0;
            for (std::size_t mu = 0; mu < 4; ++mu) {
              idx[static_cast<std::size_t>(slot)] = mu;
              v += T(idx[0], idx[1], idx[2], idx[3]) * e(mu, frame_index);
            }
            next(i0, i1, i2, i3) = v;
          }
    T = next;
  }
  return T;
}

DualityProjection duality_projection(const ModelParams& params, const Point& p) {
  const RiemannTensor R = frame_riemann(params, p);
  DualityProjection out;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t d = 0; d < 4; ++d)
          out.riemann_max = std::max(out.riemann_max, std::abs(R(a, b, c, d)));
  out.self_dual = duality_residual(R, kFrameOrientation);
  out.anti_self_dual = duality_residual(R, -kFrameOrientation);
  return out;
}

double self_duality_residual(const ModelParams& params, const Point& p, int orientation) {
  return duality_residual(frame_riemann(params, p), orientation);
}

}  // namespace taubnut
