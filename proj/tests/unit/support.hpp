#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "threebody/threebody.hpp"

namespace tbtest {

using threebody::MassTriple;
using threebody::RhoPoint;

// Planar triangle with the given squared sides: x1 at the origin, x2 on the axis.
inline Eigen::Matrix<double, 3, 2> embed(const RhoPoint& rho) {
  const double r12 = std::sqrt(rho.rho12);
  const double cx = (rho.rho12 + rho.rho31 - rho.rho23) / (2.0 * r12);
  const double cy = std::sqrt(std::max(0.0, rho.rho31 - cx * cx));
  Eigen::Matrix<double, 3, 2> x;
  x << 0.0, 0.0, r12, 0.0, cx, cy;
  return x;
}

// Kinetic cometric of the squared sides pushed forward from the Cartesian
// kinetic energy sum |p_i|^2 / (2 m_i), in the convention dq/dt = 2 G p.
inline Eigen::Matrix3d pushforward_rho(const RhoPoint& rho, const MassTriple& m) {
  const auto x = embed(rho);
  const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  // grad[a](i, :) = d rho_a / d x_i
  Eigen::Matrix<double, 3, 2> grad[3];
  for (int a = 0; a < 3; ++a) {
    grad[a].setZero();
    const int i = pairs[a][0], j = pairs[a][1];
    grad[a].row(i) = 2.0 * (x.row(i) - x.row(j));
    grad[a].row(j) = -2.0 * (x.row(i) - x.row(j));
  }
  const double mi[3] = {m.m1(), m.m2(), m.m3()};
  Eigen::Matrix3d G;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += grad[a].row(i).dot(grad[b].row(i)) / mi[i];
      G(a, b) = 0.5 * s;
    }
  }
  return G;
}

// d(P, S, T)/d rho written out by hand.
inline Eigen::Matrix3d geo_jacobian_by_hand(const RhoPoint& r) {
  const double x = r.rho12, y = r.rho23, z = r.rho31;
  Eigen::Matrix3d J;
  J << 0.5, 0.5, 0.5,
      (y + z - x) / 8.0, (x + z - y) / 8.0, (x + y - z) / 8.0,
      y * z, x * z, x * y;
  return J;
}

inline RhoPoint random_triangle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Eigen::Vector2d p[3];
    for (auto& v : p) v = {u(rng), u(rng)};
    const RhoPoint r{(p[0] - p[1]).squaredNorm(), (p[1] - p[2]).squaredNorm(),
                     (p[2] - p[0]).squaredNorm()};
    const auto g = threebody::geo_from_rho(r);
    if (g.P > 0.05 && g.S > 1e-2 * g.P * g.P &&
        threebody::geo_bracket(g) > 1e-3 * std::pow(g.P, 6)) {
      return r;
    }
  }
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace tbtest
