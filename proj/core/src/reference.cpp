#include "threebody/reference.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "threebody/dynamics.hpp"
#include "threebody/errors.hpp"
#include "threebody/hamiltonians.hpp"

namespace threebody {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

void check_modulus(double B, double k) {
  if (B == 0.0 || std::abs(k) == 1.0 || !std::isfinite(k)) {
    fail(ErrorCode::kDegenerateModulus, "need B != 0 and |k| != 1");
  }
}

}  // namespace

JacobiTriple jacobi_elliptic(double u, double m) {
  if (!(m >= 0.0 && m < 1.0)) fail(ErrorCode::kDegenerateModulus, "parameter outside [0, 1)");
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  constexpr int kMax = 32;
  std::array<double, kMax + 1> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > 1e-17 * a[n] && n < kMax) {
    const double an = a[n];
    a[n + 1] = 0.5 * (an + b);
    c[n + 1] = 0.5 * (an - b);
    b = std::sqrt(an * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  const double sn = std::sin(phi), cn = std::cos(phi);
  // cn / cos(phi_1 - phi_0) is 0/0 at odd multiples of K.
  return {sn, cn, std::sqrt(1.0 - m * sn * sn)};
}

double elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) fail(ErrorCode::kDegenerateModulus, "parameter outside [0, 1)");
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

JacobiTriple jacobi_imaginary_modulus(double u, double k) {
  const double s = std::sqrt(1.0 + k * k);
  const double m = k * k / (1.0 + k * k);
  const JacobiTriple j = jacobi_elliptic(u * s, m);
  return {j.sn / (j.dn * s), j.cn / j.dn, 1.0 / j.dn};
}

double sn_imaginary_modulus(double u, double k) { return jacobi_imaginary_modulus(u, k).sn; }

double harmonic_P(double t, double c1, double c2, double A) {
  const double c = std::cos(std::sqrt(3.0 * A) * t + c2);
  return c1 * c * c;
}

double harmonic_PP(double t, double, double c2, double A) {
  const double w = std::sqrt(3.0 * A);
  return -w * std::tan(w * t + c2) / 3.0;
}

double anharmonic_amplitude(double A, double B, double k) {
  check_modulus(B, k);
  return A * k * k / (B * (1.0 - k * k));
}

double anharmonic_P(double t, double A, double B, double k, int sign) {
  const double amp = anharmonic_amplitude(A, B, k);
  const double y = sign * std::sqrt(3.0 * A / (1.0 - k * k)) * t;
  const double sn = sn_imaginary_modulus(y, k);
  return amp * sn * sn;
}

double anharmonic_PP(double t, double A, double B, double k, int sign) {
  check_modulus(B, k);
  const double w = sign * std::sqrt(3.0 * A / (1.0 - k * k));
  const JacobiTriple j = jacobi_imaginary_modulus(w * t, k);
  return w * j.cn * j.dn / (3.0 * j.sn);
}

double anharmonic_period(double A, double k) {
  // sn^2(., ik) has period 2 K(k^2/(1+k^2)) / sqrt(1+k^2) in its argument.
  const double s = std::sqrt(1.0 + k * k);
  const double period_u = 2.0 * elliptic_k(k * k / (1.0 + k * k)) / s;
  return period_u / std::sqrt(3.0 * A / (1.0 - k * k));
}

double weierstrass_residual(double S, double S_dot) {
  return S * (256.0 * S * S + 864.0 * S - 243.0) + 48.0 * kSqrt3 * S_dot * S_dot;
}

double weierstrass_s_max() { return (9.0 * kSqrt3 - 13.5) / 8.0; }

double weierstrass_s_ddot(double S) {
  return -(768.0 * S * S + 1728.0 * S - 243.0) / (96.0 * kSqrt3);
}

LemniscateCheck lemniscate_consistency(int samples) {
  LemniscateCheck out;
  const double c = 1.5 * kSqrt3;
  const double smax = weierstrass_s_max();
  const Potential V{Lemniscate{}};
  for (int i = 0; i < samples; ++i) {
    const double S = smax * (i + 0.5) / samples;
    const double sd2 = -S * (256.0 * S * S + 864.0 * S - 243.0) / (48.0 * kSqrt3);
    const Eigen::Vector3d v(0.0, std::sqrt(std::max(0.0, sd2)), 0.0);
    const Eigen::Vector3d acc = newton_rhs_geo({c, S, c}, v, V);
    const double ref = weierstrass_s_ddot(S);
    out.S.push_back(S);
    out.s_ddot_newton.push_back(acc[1]);
    out.s_ddot_curve.push_back(ref);
    const double scale = std::abs(ref);
    out.max_relative_error = std::max(out.max_relative_error, std::abs(acc[1] - ref) / scale);
    out.max_relative_p_ddot = std::max(out.max_relative_p_ddot, std::abs(acc[0]) / scale);
    out.max_relative_t_ddot = std::max(out.max_relative_t_ddot, std::abs(acc[2]) / scale);
  }
  return out;
}

void validate(const ClosedForm& f) {
  if (const auto* h = std::get_if<HarmonicCos2>(&f)) {
    if (!(h->c1 > 0.0) || !(h->A > 0.0)) {
      fail(ErrorCode::kInvalidArgument, "harmonic form needs c1 > 0 and A > 0");
    }
  } else if (const auto* a = std::get_if<AnharmonicSn2>(&f)) {
    check_modulus(a->B, a->k);
  }
}

double closed_form_value(const ClosedForm& f, double t) {
  validate(f);
  if (const auto* h = std::get_if<HarmonicCos2>(&f)) return harmonic_P(t, h->c1, h->c2, h->A);
  if (const auto* a = std::get_if<AnharmonicSn2>(&f)) {
    return anharmonic_P(t, a->A, a->B, a->k, a->sign);
  }
  fail(ErrorCode::kInvalidArgument, "the lemniscate form is available as a residual only");
}

double closed_form_energy(const ClosedForm& f) {
  validate(f);
  if (const auto* h = std::get_if<HarmonicCos2>(&f)) return eval_H_harmonic_energy(h->A, h->c1);
  if (const auto* a = std::get_if<AnharmonicSn2>(&f)) {
    return eval_H_anharmonic_energy(a->A, a->B, a->k);
  }
  return 0.0;
}

}  // namespace threebody
