#pragma once

#include <array>

namespace threebody {

// Coordinate order used everywhere in the library: (12, 23, 31).
class MassTriple {
 public:
  MassTriple() : MassTriple(1.0, 1.0, 1.0) {}
  MassTriple(double m1, double m2, double m3);

  double m1() const { return m_[0]; }
  double m2() const { return m_[1]; }
  double m3() const { return m_[2]; }
  double total() const { return m_[0] + m_[1] + m_[2]; }
  double product() const { return m_[0] * m_[1] * m_[2]; }

  double mu12() const { return m_[0] * m_[1] / total(); }
  double mu23() const { return m_[1] * m_[2] / total(); }
  double mu31() const { return m_[2] * m_[0] / total(); }

  double m12() const { return m_[0] * m_[1] / (m_[0] + m_[1]); }
  double m23() const { return m_[1] * m_[2] / (m_[1] + m_[2]); }
  double m31() const { return m_[2] * m_[0] / (m_[2] + m_[0]); }

  // M / (3 m1 m2 m3); equals 1 for unit masses.
  double volume_scale() const { return total() / (3.0 * product()); }

  bool is_unit() const { return m_[0] == 1.0 && m_[1] == 1.0 && m_[2] == 1.0; }

  const std::array<double, 3>& values() const { return m_; }

  friend bool operator==(const MassTriple&, const MassTriple&) = default;

 private:
  std::array<double, 3> m_;
};

struct SideLengths {
  double r12 = 0, r23 = 0, r31 = 0;
};

struct RhoPoint {
  double rho12 = 0, rho23 = 0, rho31 = 0;

  std::array<double, 3> as_array() const { return {rho12, rho23, rho31}; }
  static RhoPoint from_array(const std::array<double, 3>& a) {
    return {a[0], a[1], a[2]};
  }
  friend bool operator==(const RhoPoint&, const RhoPoint&) = default;
};

struct GeoPoint {
  double P = 0, S = 0, T = 0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct ModifiedVolumePoint {
  double Pm = 0, Sm = 0;
};

struct AreaSquared {
  double value = 0;
  bool physical = true;
};

// Sorted ascending representative plus the number of distinct labelings
// (1 for equilateral, 3 for isosceles, 6 for scalene).
struct RhoPreimage {
  RhoPoint sorted;
  int multiplicity = 0;
};

RhoPoint rho_from_r(const SideLengths& r);
SideLengths r_from_rho(const RhoPoint& rho);

GeoPoint geo_from_rho(const RhoPoint& rho);
RhoPreimage rho_from_geo(const GeoPoint& geo);

// Cayley-Menger form of the squared area; S >= -1e-10 P^2 counts as physical.
AreaSquared area_sq_cayley_menger(const RhoPoint& rho);
double area_sq(const RhoPoint& rho);

double moment_of_inertia(const RhoPoint& rho, const MassTriple& m);
ModifiedVolumePoint modified_volume(const RhoPoint& rho, const MassTriple& m);

// 4PT(36S+P^2) - 16S(4S+P^2)^2 - 27T^2, accumulated in extended precision.
double geo_bracket(const GeoPoint& g);
// Discriminant of t^3 + a t^2 + b t + c by the generic formula.
double cubic_discriminant(double a, double b, double c);

// P^2 - 12 S in extended precision; half the sum of squared rho differences.
double equilateral_defect(double P, double S);

// d(P,S,T)/d(rho12,rho23,rho31), row per output.
std::array<std::array<double, 3>, 3> geo_jacobian(const RhoPoint& rho);

}  // namespace threebody
