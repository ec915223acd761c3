#pragma once

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "threebody/geometry.hpp"

namespace threebody {

enum class MetricKind { kR, kRho, kGeo, kVol, kVolM };

struct Cometric3 {
  Eigen::Matrix3d g;
  MetricKind kind;
};

struct Cometric2 {
  Eigen::Matrix2d g;
  MetricKind kind;
};

enum class DegeneracyClass { kRegular, kTripleCollision, kCollinear, kIsosceles };

const char* to_string(DegeneracyClass c);

// Entry builders, generic in the scalar so the same expressions can be
// evaluated in extended precision or with automatic differentiation.
// Index order (12, 23, 31).
template <class Scalar>
Eigen::Matrix<Scalar, 3, 3> cometric_r_matrix(const Scalar& r12, const Scalar& r23,
                                              const Scalar& r31, const Scalar& m1,
                                              const Scalar& m2, const Scalar& m3) {
  const Scalar a = r12 * r12, b = r23 * r23, c = r31 * r31;
  Eigen::Matrix<Scalar, 3, 3> g;
  g(0, 0) = (m1 + m2) / (2 * m1 * m2);
  g(1, 1) = (m2 + m3) / (2 * m2 * m3);
  g(2, 2) = (m3 + m1) / (2 * m3 * m1);
  g(0, 1) = g(1, 0) = (a + b - c) / (4 * m2 * r12 * r23);
  g(0, 2) = g(2, 0) = (a + c - b) / (4 * m1 * r12 * r31);
  g(1, 2) = g(2, 1) = (b + c - a) / (4 * m3 * r23 * r31);
  return g;
}

template <class Scalar>
Eigen::Matrix<Scalar, 3, 3> cometric_rho_matrix(const Scalar& a, const Scalar& b,
                                                const Scalar& c, const Scalar& m1,
                                                const Scalar& m2, const Scalar& m3) {
  Eigen::Matrix<Scalar, 3, 3> g;
  g(0, 0) = 2 * a * (m1 + m2) / (m1 * m2);
  g(1, 1) = 2 * b * (m2 + m3) / (m2 * m3);
  g(2, 2) = 2 * c * (m3 + m1) / (m3 * m1);
  g(0, 1) = g(1, 0) = (a + b - c) / m2;
  g(0, 2) = g(2, 0) = (a + c - b) / m1;
  g(1, 2) = g(2, 1) = (b + c - a) / m3;
  return g;
}

template <class Scalar>
Eigen::Matrix<Scalar, 3, 3> cometric_geo_matrix(const Scalar& P, const Scalar& S,
                                                const Scalar& T) {
  Eigen::Matrix<Scalar, 3, 3> g;
  const Scalar u = 4 * S + P * P;
  g(0, 0) = 3 * P;
  g(0, 1) = g(1, 0) = 6 * S;
  g(0, 2) = g(2, 0) = 9 * T;
  g(1, 1) = P * S;
  g(1, 2) = g(2, 1) = 4 * S * u;
  g(2, 2) = 4 * (12 * S + P * P) * T;
  return g;
}

template <class Scalar>
Eigen::Matrix<Scalar, 2, 2> cometric_vol_matrix(const Scalar& P, const Scalar& S) {
  Eigen::Matrix<Scalar, 2, 2> g;
  g(0, 0) = 3 * P;
  g(0, 1) = g(1, 0) = 6 * S;
  g(1, 1) = P * S;
  return g;
}

Cometric3 cometric_r(const SideLengths& r, const MassTriple& m);
Cometric3 cometric_rho(const RhoPoint& rho, const MassTriple& m);
Cometric3 cometric_geo(const GeoPoint& geo);
Cometric2 cometric_vol(double P, double S);
Cometric2 cometric_vol_mass(const ModifiedVolumePoint& v, const MassTriple& m);

// Partial derivatives dG/dq_k, k over the representation's coordinates.
std::array<Eigen::Matrix3d, 3> cometric_r_gradient(const SideLengths& r,
                                                   const MassTriple& m);
std::array<Eigen::Matrix3d, 3> cometric_rho_gradient(const MassTriple& m);
std::array<Eigen::Matrix3d, 3> cometric_geo_gradient(const GeoPoint& geo);
std::array<Eigen::Matrix2d, 2> cometric_vol_gradient(double P, double S);
std::array<Eigen::Matrix2d, 2> cometric_vol_mass_gradient(const ModifiedVolumePoint& v,
                                                          const MassTriple& m);

// Factorized determinants.
double det_r_factorized(const SideLengths& r, const MassTriple& m);
double det_rho_factorized(const RhoPoint& rho, const MassTriple& m);
double det_rho_inertia_form(const RhoPoint& rho, const MassTriple& m);
double det_geo_factorized(const GeoPoint& geo);
double det_vol_factorized(double P, double S);
double det_vol_mass_factorized(const ModifiedVolumePoint& v, const MassTriple& m);

DegeneracyClass classify_degeneracy(const GeoPoint& geo, double eps = 1e-10);

// Second-order jet of a 2x2 metric at a point.
struct MetricJet2 {
  Eigen::Matrix2d g;
  std::array<Eigen::Matrix2d, 2> dg;
  std::array<std::array<Eigen::Matrix2d, 2>, 2> ddg;
};

double ricci_scalar_2d(const MetricJet2& jet);

// Jet of the inverse matrix field given the jet of the matrix field.
MetricJet2 invert_jet(const MetricJet2& jet);

// Central-difference jet of a matrix field; h holds the step per coordinate.
MetricJet2 finite_difference_jet(
    const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& field,
    const Eigen::Vector2d& x, const Eigen::Vector2d& h);

// Analytic jet of the unit-mass volume cometric.
MetricJet2 cometric_vol_jet(double P, double S);

struct RicciReport {
  double independent = 0;        // Ricci scalar of the metric inverse to the cometric
  double candidate_formula = 0;      // 3SP(S-3)/D_vol^2
  double abs_difference = 0;
  double cometric_as_metric = 0;  // Ricci scalar with the cometric read as a metric
};

RicciReport ricci_scalar_vol(double P, double S);
RicciReport ricci_scalar_vol_mass(const ModifiedVolumePoint& v, const MassTriple& m);

}  // namespace threebody
