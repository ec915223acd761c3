#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "threebody/geometry.hpp"

namespace threebody {

enum class PotentialDependence { kRhoGeneral, kPST, kPS, kPOnly, kPmSm, kPmOnly };

const char* to_string(PotentialDependence d);

class Potential;

// -gamma * sum rho^{-1/2}
struct NewtonGravity {
  double gamma = 1.0;
};

// (gamma/2) ln T, the planar logarithmic law.
struct LogGravity2D {
  double gamma = 1.0;
};

// 2 omega^2 (nu12 rho12 + nu13 rho31 + nu23 rho23)
struct HarmonicChain {
  double omega = 1.0;
  double nu12 = 1.0, nu13 = 1.0, nu23 = 1.0;
};

// (1/4) ln T - (sqrt(3)/12) P
struct Lemniscate {};

// A P + B P^2 + C S
struct AnharmonicPS {
  double A = 0.0, B = 0.0, C = 0.0;
};

// U(P/sqrt(S)) / sqrt(S). dU is the derivative of U.
struct ScaleFamily {
  std::function<double(double)> U;
  std::function<double(double)> dU;
  std::string label;
};

// (M/(3 m1 m2 m3)) * inner(Pm, Sm); inner must depend on (P, S) at most.
struct VolumeMass {
  std::shared_ptr<const Potential> inner;
  MassTriple masses;
};

using PotentialSpec = std::variant<NewtonGravity, LogGravity2D, HarmonicChain, Lemniscate,
                                   AnharmonicPS, ScaleFamily, VolumeMass>;

class Potential {
 public:
  Potential() : spec_(AnharmonicPS{}) {}
  Potential(PotentialSpec spec);  // NOLINT(google-explicit-constructor)

  const PotentialSpec& spec() const { return spec_; }
  PotentialDependence dependence() const;
  // Symmetric under relabeling of the bodies, so well defined on (P, S, T).
  bool is_symmetric() const;

  double value(const RhoPoint& rho) const;
  Eigen::Vector3d gradient(const RhoPoint& rho) const;

  // (P, S, T) chart; RepresentationMismatch for non-symmetric potentials.
  double value_geo(const GeoPoint& g) const;
  Eigen::Vector3d gradient_geo(const GeoPoint& g) const;

  // (P, S) chart. For VolumeMass the arguments are (Pm, Sm) and the mass
  // prefactor is included.
  double value_vol(double P, double S) const;
  Eigen::Vector2d gradient_vol(double P, double S) const;

  // Pure P dependence; the derivative is d/dP.
  double value_p(double P) const;
  double derivative_p(double P) const;

 private:
  PotentialSpec spec_;
};

Potential make_volume_mass(const Potential& inner, const MassTriple& m);
ScaleFamily make_power_scale_family(double coeff, double exponent);

enum class CoulombLabel { kNewton, kFirst, kSecond, kThird, kUnmatched };

struct QuarticRoots {
  std::array<double, 5> coefficients{};  // leading first: T^2, 0, ..., constant
  std::array<std::complex<double>, 4> roots{};
  double discriminant_closed_form = 0.0;
  double discriminant_from_coefficients = 0.0;
  bool has_preimage = false;
  std::array<CoulombLabel, 4> labels{};
  // Max distance between a root and its assigned sign-pattern value,
  // relative to gamma * sum rho^{-1/2}.
  double max_label_error = 0.0;
};

// Residual of the quartic at trial V.
double newton_quartic_residual(const GeoPoint& g, double gamma, double V);
QuarticRoots newton_quartic_roots(const GeoPoint& g, double gamma);
// Standard discriminant of a x^4 + b x^3 + c x^2 + d x + e.
double quartic_discriminant(double a, double b, double c, double d, double e);

// 2 S dV/dS + P dV/dP + V for V = U(P/sqrt S)/sqrt S.
double scale_family_check(const ScaleFamily& f, double P, double S);

enum class SuperintegrabilityClass { kMaximal, kMinimal, kGeneric };
const char* to_string(SuperintegrabilityClass c);

SuperintegrabilityClass superintegrability_class(const MassTriple& m, double nu12,
                                                 double nu13, double nu23);

}  // namespace threebody
