#include "threebody/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "quad.hpp"
#include "threebody/errors.hpp"

namespace threebody {

using detail::d;
using detail::q;
using detail::quad;

MassTriple::MassTriple(double m1, double m2, double m3) : m_{m1, m2, m3} {
  for (double v : m_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::kInvalidArgument, "masses must be positive and finite");
    }
  }
}

RhoPoint rho_from_r(const SideLengths& r) {
  return {r.r12 * r.r12, r.r23 * r.r23, r.r31 * r.r31};
}

SideLengths r_from_rho(const RhoPoint& rho) {
  return {std::sqrt(rho.rho12), std::sqrt(rho.rho23), std::sqrt(rho.rho31)};
}

namespace {

quad area_sq_q(const RhoPoint& rho) {
  std::array<double, 3> v = rho.as_array();
  std::sort(v.begin(), v.end());
  const quad a = q(v[0]), b = q(v[1]), c = q(v[2]);
  return (2 * a * b + 2 * a * c + 2 * b * c - a * a - b * b - c * c) / 16;
}

}  // namespace

double area_sq(const RhoPoint& rho) { return d(area_sq_q(rho)); }

AreaSquared area_sq_cayley_menger(const RhoPoint& rho) {
  const double S = area_sq(rho);
  const double P = 0.5 * (rho.rho12 + rho.rho23 + rho.rho31);
  return {S, S >= -1e-10 * P * P};
}

GeoPoint geo_from_rho(const RhoPoint& rho) {
  // Sorting first makes every sum order-independent, hence exact invariance
  // under relabeling.
  std::array<double, 3> v = rho.as_array();
  std::sort(v.begin(), v.end());
  const RhoPoint s = RhoPoint::from_array(v);
  GeoPoint g;
  g.P = d((q(v[0]) + q(v[1]) + q(v[2])) / 2);
  g.S = area_sq(s);
  g.T = d(q(v[0]) * q(v[1]) * q(v[2]));
  return g;
}

double geo_bracket(const GeoPoint& g) {
  const quad P = q(g.P), S = q(g.S), T = q(g.T);
  const quad u = 4 * S + P * P;
  return d(4 * P * T * (36 * S + P * P) - 16 * S * u * u - 27 * T * T);
}

double cubic_discriminant(double a, double b, double c) {
  const quad A = q(a), B = q(b), C = q(c);
  return d(18 * A * B * C - 4 * A * A * A * C + A * A * B * B - 4 * B * B * B -
           27 * C * C);
}

double equilateral_defect(double P, double S) {
  return d(q(P) * q(P) - 12 * q(S));
}

RhoPreimage rho_from_geo(const GeoPoint& geo) {
  const double P = geo.P, S = geo.S, T = geo.T;
  if (!std::isfinite(P) || !std::isfinite(S) || !std::isfinite(T)) {
    fail(ErrorCode::kInvalidArgument, "non-finite geometric point");
  }
  const double scale = std::max(2.0 * std::abs(P), 1e-300);
  if (P < 0.0) fail(ErrorCode::kNoPhysicalPreimage, "P < 0");
  if (P == 0.0) {
    if (S == 0.0 && T == 0.0) return {{0, 0, 0}, 1};
    fail(ErrorCode::kNoPhysicalPreimage, "P = 0 with nonzero S or T");
  }

  const double bracket = geo_bracket(geo);
  const double p6 = std::pow(P, 6);
  if (bracket < -1e-10 * p6) {
    fail(ErrorCode::kNoPhysicalPreimage,
         "complex roots (discriminant " + std::to_string(bracket) + ")");
  }

  // t^3 - 2P t^2 + (4S+P^2) t - T; shift t = x + 2P/3.
  const double shift = 2.0 * P / 3.0;
  const double pp = 4.0 * S - P * P / 3.0;
  const double qq = d(-16 * q(P) * q(P) * q(P) / 27 +
                      2 * q(P) * (4 * q(S) + q(P) * q(P)) / 3 - q(T));
  std::array<double, 3> roots{};
  if (pp >= 0.0) {
    const double x = std::cbrt(-qq);
    roots = {x + shift, x + shift, x + shift};
  } else {
    const double m = 2.0 * std::sqrt(-pp / 3.0);
    double arg = 3.0 * qq / (pp * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift;
    }
  }

  const quad b1 = 2 * q(P), b2 = 4 * q(S) + q(P) * q(P), b3 = q(T);
  auto f = [&](quad t) { return ((t - b1) * t + b2) * t - b3; };
  auto fp = [&](quad t) { return (3 * t - 2 * b1) * t + b2; };
  for (double& r : roots) {
    quad t = q(r);
    quad ft = f(t);
    for (int it = 0; it < 8; ++it) {
      const quad der = fp(t);
      if (der == 0) break;
      const quad tn = t - ft / der;
      const quad fn = f(tn);
      if (detail::abs_q(fn) >= detail::abs_q(ft)) break;
      t = tn;
      ft = fn;
    }
    r = d(t);
  }

  std::sort(roots.begin(), roots.end());
  for (double& r : roots) {
    if (r < 0.0) {
      if (r >= -1e-12 * scale) {
        r = 0.0;
      } else {
        fail(ErrorCode::kNoPhysicalPreimage, "negative squared side");
      }
    }
  }

  const double eq_tol = 1e-8 * std::max(roots[2], 1e-300);
  const bool e01 = roots[1] - roots[0] <= eq_tol;
  const bool e12 = roots[2] - roots[1] <= eq_tol;
  int mult = 6;
  if (e01 && e12) {
    mult = 1;
  } else if (e01 || e12) {
    mult = 3;
  }
  return {RhoPoint::from_array(roots), mult};
}

double moment_of_inertia(const RhoPoint& rho, const MassTriple& m) {
  return m.mu12() * rho.rho12 + m.mu23() * rho.rho23 + m.mu31() * rho.rho31;
}

ModifiedVolumePoint modified_volume(const RhoPoint& rho, const MassTriple& m) {
  ModifiedVolumePoint v;
  v.Pm = 0.5 * (rho.rho12 / m.m3() + rho.rho23 / m.m1() + rho.rho31 / m.m2());
  const double S = area_sq(rho);
  v.Sm = m.is_unit() ? S : 3.0 * m.product() / m.total() * S;
  return v;
}

std::array<std::array<double, 3>, 3> geo_jacobian(const RhoPoint& rho) {
  const double a = rho.rho12, b = rho.rho23, c = rho.rho31;
  return {{{0.5, 0.5, 0.5},
           {(b + c - a) / 8.0, (a + c - b) / 8.0, (a + b - c) / 8.0},
           {b * c, a * c, a * b}}};
}

}  // namespace threebody
