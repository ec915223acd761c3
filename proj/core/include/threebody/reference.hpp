#pragma once

#include <variant>
#include <vector>

namespace threebody {

struct JacobiTriple {
  double sn = 0, cn = 0, dn = 0;
};

// Jacobi elliptic functions for real argument and parameter m = k^2 in [0, 1),
// by the descending AGM (Landen) scheme.
JacobiTriple jacobi_elliptic(double u, double m);
// Complete elliptic integral of the first kind, parameter m.
double elliptic_k(double m);

// sn, cn, dn at imaginary modulus i k via the real transformation
// sn(u, ik) = sd(u sqrt(1+k^2), k/sqrt(1+k^2)) / sqrt(1+k^2).
JacobiTriple jacobi_imaginary_modulus(double u, double k);
double sn_imaginary_modulus(double u, double k);

// c1 cos^2(sqrt(3A) t + c2)
double harmonic_P(double t, double c1, double c2, double A);
// Canonical momentum dP/dt / (6P) along the same solution.
double harmonic_PP(double t, double c1, double c2, double A);

// (A k^2 / (B (1-k^2))) sn^2(sign * sqrt(3A/(1-k^2)) t, ik)
double anharmonic_P(double t, double A, double B, double k, int sign = 1);
double anharmonic_PP(double t, double A, double B, double k, int sign = 1);
double anharmonic_amplitude(double A, double B, double k);
double anharmonic_period(double A, double k);

// S (256 S^2 + 864 S - 243) + 48 sqrt(3) S_dot^2
double weierstrass_residual(double S, double S_dot);
double weierstrass_s_max();
// S_ddot implied by differentiating the Weierstrass curve.
double weierstrass_s_ddot(double S);

struct LemniscateCheck {
  std::vector<double> S;
  std::vector<double> s_ddot_newton;
  std::vector<double> s_ddot_curve;
  double max_relative_error = 0.0;
  // |P_ddot| and |T_ddot| relative to |S_ddot| at the same points.
  double max_relative_p_ddot = 0.0;
  double max_relative_t_ddot = 0.0;
};

// Evaluates the (P,S,T) Newton equations with the lemniscate potential at
// P = T = 3 sqrt(3)/2, P_dot = T_dot = 0 and S_dot from the curve.
LemniscateCheck lemniscate_consistency(int samples = 20);

struct HarmonicCos2 {
  double c1 = 1, c2 = 0, A = 1;
};
struct AnharmonicSn2 {
  double A = 1, B = 1, k = 0.5;
  int sign = 1;
};
struct WeierstrassLemniscate {};

using ClosedForm = std::variant<HarmonicCos2, AnharmonicSn2, WeierstrassLemniscate>;

// P(t) for the trigonometric and elliptic forms. The lemniscate case is known
// only through its residual and throws InvalidArgument.
double closed_form_value(const ClosedForm& f, double t);
double closed_form_energy(const ClosedForm& f);
void validate(const ClosedForm& f);

}  // namespace threebody
