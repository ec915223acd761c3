#include "threebody/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <unsupported/Eigen/AutoDiff>

#include "quad.hpp"
#include "threebody/errors.hpp"

namespace threebody {

using detail::d;
using detail::q;

const char* to_string(DegeneracyClass c) {
  switch (c) {
    case DegeneracyClass::kRegular: return "Regular";
    case DegeneracyClass::kTripleCollision: return "TripleCollision";
    case DegeneracyClass::kCollinear: return "Collinear";
    case DegeneracyClass::kIsosceles: return "Isosceles";
  }
  return "Unknown";
}

Cometric3 cometric_r(const SideLengths& r, const MassTriple& m) {
  if (!(r.r12 > 0.0) || !(r.r23 > 0.0) || !(r.r31 > 0.0)) {
    fail(ErrorCode::kBinaryCollision, "r-representation cometric at r = 0");
  }
  return {cometric_r_matrix(r.r12, r.r23, r.r31, m.m1(), m.m2(), m.m3()),
          MetricKind::kR};
}

Cometric3 cometric_rho(const RhoPoint& rho, const MassTriple& m) {
  return {cometric_rho_matrix(rho.rho12, rho.rho23, rho.rho31, m.m1(), m.m2(), m.m3()),
          MetricKind::kRho};
}

Cometric3 cometric_geo(const GeoPoint& geo) {
  return {cometric_geo_matrix(geo.P, geo.S, geo.T), MetricKind::kGeo};
}

Cometric2 cometric_vol(double P, double S) {
  return {cometric_vol_matrix(P, S), MetricKind::kVol};
}

Cometric2 cometric_vol_mass(const ModifiedVolumePoint& v, const MassTriple& m) {
  return {m.volume_scale() * cometric_vol_matrix(v.Pm, v.Sm), MetricKind::kVolM};
}

std::array<Eigen::Matrix3d, 3> cometric_r_gradient(const SideLengths& r,
                                                   const MassTriple& m) {
  if (!(r.r12 > 0.0) || !(r.r23 > 0.0) || !(r.r31 > 0.0)) {
    fail(ErrorCode::kBinaryCollision, "r-representation cometric at r = 0");
  }
  using AD = Eigen::AutoDiffScalar<Eigen::Vector3d>;
  const AD a(r.r12, 3, 0), b(r.r23, 3, 1), c(r.r31, 3, 2);
  const AD m1(m.m1()), m2(m.m2()), m3(m.m3());
  const auto g = cometric_r_matrix<AD>(a, b, c, m1, m2, m3);
  std::array<Eigen::Matrix3d, 3> out;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const auto& der = g(i, j).derivatives();
        out[k](i, j) = der.size() == 3 ? der[k] : 0.0;
      }
    }
  }
  return out;
}

std::array<Eigen::Matrix3d, 3> cometric_rho_gradient(const MassTriple& m) {
  const double i1 = 1.0 / m.m1(), i2 = 1.0 / m.m2(), i3 = 1.0 / m.m3();
  std::array<Eigen::Matrix3d, 3> out;
  out[0] << 2.0 / m.m12(), i2, i1,
            i2, 0, -i3,
            i1, -i3, 0;
  out[1] << 0, i2, -i1,
            i2, 2.0 / m.m23(), i3,
            -i1, i3, 0;
  out[2] << 0, -i2, i1,
            -i2, 0, i3,
            i1, i3, 2.0 / m.m31();
  return out;
}

std::array<Eigen::Matrix3d, 3> cometric_geo_gradient(const GeoPoint& geo) {
  const double P = geo.P, S = geo.S, T = geo.T;
  std::array<Eigen::Matrix3d, 3> out;
  out[0] << 3, 0, 0,
            0, S, 8 * S * P,
            0, 8 * S * P, 8 * P * T;
  out[1] << 0, 6, 0,
            6, P, 32 * S + 4 * P * P,
            0, 32 * S + 4 * P * P, 48 * T;
  out[2] << 0, 0, 9,
            0, 0, 0,
            9, 0, 4 * (12 * S + P * P);
  return out;
}

std::array<Eigen::Matrix2d, 2> cometric_vol_gradient(double P, double S) {
  std::array<Eigen::Matrix2d, 2> out;
  out[0] << 3, 0,
            0, S;
  out[1] << 0, 6,
            6, P;
  return out;
}

std::array<Eigen::Matrix2d, 2> cometric_vol_mass_gradient(const ModifiedVolumePoint& v,
                                                          const MassTriple& m) {
  auto out = cometric_vol_gradient(v.Pm, v.Sm);
  for (auto& x : out) x *= m.volume_scale();
  return out;
}

double det_r_factorized(const SideLengths& r, const MassTriple& m) {
  // Squares of doubles are exact in quad, so the near-collinear area keeps
  // full relative accuracy.
  std::array<double, 3> s{r.r12, r.r23, r.r31};
  std::sort(s.begin(), s.end());
  const detail::quad a = detail::q(s[0]) * s[0], b = detail::q(s[1]) * s[1],
                     c = detail::q(s[2]) * s[2];
  const double S = detail::d((2 * a * b + 2 * a * c + 2 * b * c - a * a - b * b - c * c) / 16);
  const RhoPoint rho = rho_from_r(r);
  const double M = m.total();
  const double mp = m.product();
  return M * M / (2.0 * mp * mp) * moment_of_inertia(rho, m) * S /
         (rho.rho12 * rho.rho23 * rho.rho31);
}

double det_rho_factorized(const RhoPoint& rho, const MassTriple& m) {
  const double mp = m.product();
  const double lin = m.m1() * m.m2() * rho.rho12 + m.m1() * m.m3() * rho.rho31 +
                     m.m2() * m.m3() * rho.rho23;
  return 2.0 * m.total() / (mp * mp) * lin * 16.0 * area_sq(rho);
}

double det_rho_inertia_form(const RhoPoint& rho, const MassTriple& m) {
  const double M = m.total();
  const double mp = m.product();
  return 32.0 * M * M / (mp * mp) * moment_of_inertia(rho, m) * area_sq(rho);
}

double det_geo_factorized(const GeoPoint& geo) {
  return 3.0 * geo.P * geo.S * geo_bracket(geo);
}

double det_vol_factorized(double P, double S) {
  return 3.0 * S * equilateral_defect(P, S);
}

double det_vol_mass_factorized(const ModifiedVolumePoint& v, const MassTriple& m) {
  const double M = m.total();
  const double mp = m.product();
  return M * M / (3.0 * mp * mp) * v.Sm * equilateral_defect(v.Pm, v.Sm);
}

DegeneracyClass classify_degeneracy(const GeoPoint& geo, double eps) {
  if (geo.P < eps) return DegeneracyClass::kTripleCollision;
  if (geo.S < eps * geo.P * geo.P) return DegeneracyClass::kCollinear;
  if (geo_bracket(geo) < eps * std::pow(geo.P, 6)) return DegeneracyClass::kIsosceles;
  return DegeneracyClass::kRegular;
}

double ricci_scalar_2d(const MetricJet2& jet) {
  constexpr int n = 2;
  const Eigen::Matrix2d gi = jet.g.inverse();
  std::array<Eigen::Matrix2d, 2> dgi;
  for (int m = 0; m < n; ++m) dgi[m] = -gi * jet.dg[m] * gi;

  // Christoffel symbols Gamma[k](i,j) and their derivatives dGamma[m][k](i,j).
  std::array<Eigen::Matrix2d, 2> gam;
  std::array<std::array<Eigen::Matrix2d, 2>, 2> dgam;
  for (int k = 0; k < n; ++k) {
    gam[k].setZero();
    for (int m = 0; m < n; ++m) dgam[m][k].setZero();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          const double c = jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j);
          gam[k](i, j) += 0.5 * gi(k, l) * c;
          for (int m = 0; m < n; ++m) {
            const double dc =
                jet.ddg[m][i](l, j) + jet.ddg[m][j](l, i) - jet.ddg[m][l](i, j);
            dgam[m][k](i, j) += 0.5 * (dgi[m](k, l) * c + gi(k, l) * dc);
          }
        }
      }
    }
  }

  double R = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double Rij = 0.0;
      for (int k = 0; k < n; ++k) {
        Rij += dgam[k][k](i, j) - dgam[j][k](i, k);
        for (int l = 0; l < n; ++l) {
          Rij += gam[k](k, l) * gam[l](i, j) - gam[k](j, l) * gam[l](i, k);
        }
      }
      R += gi(i, j) * Rij;
    }
  }
  return R;
}

MetricJet2 invert_jet(const MetricJet2& jet) {
  MetricJet2 out;
  out.g = jet.g.inverse();
  for (int k = 0; k < 2; ++k) out.dg[k] = -out.g * jet.dg[k] * out.g;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      out.ddg[k][l] = -out.dg[l] * jet.dg[k] * out.g -
                      out.g * jet.ddg[k][l] * out.g -
                      out.g * jet.dg[k] * out.dg[l];
    }
  }
  return out;
}

MetricJet2 finite_difference_jet(
    const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& field,
    const Eigen::Vector2d& x, const Eigen::Vector2d& h) {
  MetricJet2 jet;
  jet.g = field(x);
  std::array<Eigen::Vector2d, 2> e;
  e[0] = Eigen::Vector2d(h[0], 0);
  e[1] = Eigen::Vector2d(0, h[1]);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Matrix2d fp = field(x + e[k]);
    const Eigen::Matrix2d fm = field(x - e[k]);
    jet.dg[k] = (fp - fm) / (2.0 * h[k]);
    jet.ddg[k][k] = (fp - 2.0 * jet.g + fm) / (h[k] * h[k]);
  }
  const Eigen::Matrix2d mixed = (field(x + e[0] + e[1]) - field(x + e[0] - e[1]) -
                                 field(x - e[0] + e[1]) + field(x - e[0] - e[1])) /
                                (4.0 * h[0] * h[1]);
  jet.ddg[0][1] = mixed;
  jet.ddg[1][0] = mixed;
  return jet;
}

MetricJet2 cometric_vol_jet(double P, double S) {
  MetricJet2 jet;
  jet.g = cometric_vol_matrix(P, S);
  jet.dg = cometric_vol_gradient(P, S);
  Eigen::Matrix2d cross;
  cross << 0, 0,
           0, 1;
  jet.ddg[0][0].setZero();
  jet.ddg[1][1].setZero();
  jet.ddg[0][1] = cross;
  jet.ddg[1][0] = cross;
  return jet;
}

RicciReport ricci_scalar_vol(double P, double S) {
  const double D = det_vol_factorized(P, S);
  const double scale = std::max(1e-300, std::abs(P * P * S));
  if (!(std::abs(D) > 1e-12 * scale)) {
    fail(ErrorCode::kDegenerateMetric, "volume metric determinant vanishes");
  }
  const MetricJet2 co = cometric_vol_jet(P, S);
  RicciReport rep;
  rep.independent = ricci_scalar_2d(invert_jet(co));
  rep.cometric_as_metric = ricci_scalar_2d(co);
  rep.candidate_formula = 3.0 * S * P * (S - 3.0) / (D * D);
  rep.abs_difference = std::abs(rep.independent - rep.candidate_formula);
  return rep;
}

RicciReport ricci_scalar_vol_mass(const ModifiedVolumePoint& v, const MassTriple& m) {
  const double D = det_vol_mass_factorized(v, m);
  const double scale = std::max(1e-300, std::abs(v.Pm * v.Pm * v.Sm));
  const double c = m.volume_scale();
  if (!(std::abs(D) > 1e-12 * c * c * scale)) {
    fail(ErrorCode::kDegenerateMetric, "volume metric determinant vanishes");
  }
  MetricJet2 co = cometric_vol_jet(v.Pm, v.Sm);
  co.g *= c;
  for (auto& x : co.dg) x *= c;
  for (auto& row : co.ddg) {
    for (auto& x : row) x *= c;
  }
  const double M = m.total();
  const double mp = m.product();
  RicciReport rep;
  rep.independent = ricci_scalar_2d(invert_jet(co));
  rep.cometric_as_metric = ricci_scalar_2d(co);
  rep.candidate_formula = M * M * M * v.Sm * v.Pm * (v.Sm - 3.0) / (9.0 * mp * mp * mp * D * D);
  rep.abs_difference = std::abs(rep.independent - rep.candidate_formula);
  return rep;
}

}  // namespace threebody
