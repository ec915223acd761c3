#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace threebody;

namespace {

Eigen::Vector3d fd_gradient(const Potential& V, const RhoPoint& r) {
  Eigen::Vector3d g;
  const auto a = r.as_array();
  for (int k = 0; k < 3; ++k) {
    const double h = std::cbrt(2.2e-16) * std::abs(a[k]);
    auto up = a, dn = a;
    up[k] += h;
    dn[k] -= h;
    g[k] = (V.value(RhoPoint::from_array(up)) - V.value(RhoPoint::from_array(dn))) / (2 * h);
  }
  return g;
}

}  // namespace

TEST(Potentials, Values) {
  EXPECT_NEAR(Potential{NewtonGravity{1.0}}.value({1, 1, 1}), -3.0, 1e-15);
  EXPECT_NEAR(Potential{Lemniscate{}}.value({1, 1, 1}), -std::sqrt(3.0) / 8.0, 1e-15);
  const Potential chain{HarmonicChain{1.0, 1.0, 1.0, 1.0}};
  EXPECT_NEAR(chain.value({1, 2, 3}), 12.0, 1e-14);
  try {
    Potential{NewtonGravity{1.0}}.value({0, 1, 1});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCollisionSingularity);
  }
}

TEST(Potentials, ClosedFormGradients) {
  const Potential ap{AnharmonicPS{0.7, -0.3, 0.0}};
  const Eigen::Vector2d g = ap.gradient_vol(2.0, 0.25);
  EXPECT_NEAR(g[0], 0.7 + 2 * -0.3 * 2.0, 1e-15);
  EXPECT_EQ(g[1], 0.0);
  const RhoPoint r{0.8, 1.3, 1.9};
  const Eigen::Vector3d gn = Potential{NewtonGravity{1.7}}.gradient(r);
  EXPECT_NEAR(gn[0], 0.85 * std::pow(0.8, -1.5), 1e-14);
  EXPECT_NEAR(gn[1], 0.85 * std::pow(1.3, -1.5), 1e-14);
  EXPECT_NEAR(gn[2], 0.85 * std::pow(1.9, -1.5), 1e-14);
}

TEST(Potentials, GradientsMatchFiniteDifferences) {
  const MassTriple m(1.0, 2.0, 3.0);
  const std::vector<Potential> all = {
      Potential{NewtonGravity{1.3}},
      Potential{LogGravity2D{0.8}},
      Potential{HarmonicChain{0.7, 1.0, 0.4, 2.2}},
      Potential{Lemniscate{}},
      Potential{AnharmonicPS{0.3, -0.2, 0.9}},
      Potential{make_power_scale_family(-1.1, 1.0)},
      make_volume_mass(Potential{AnharmonicPS{0.3, 0.1, -0.4}}, m),
  };
  std::mt19937_64 rng(31);
  for (const auto& V : all) {
    for (int i = 0; i < 50; ++i) {
      const RhoPoint r = tbtest::random_triangle(rng);
      const Eigen::Vector3d a = V.gradient(r), f = fd_gradient(V, r);
      EXPECT_LE((a - f).cwiseAbs().maxCoeff(), 1e-7 * std::max(1.0, a.cwiseAbs().maxCoeff()))
          << to_string(V.dependence()) << " at " << r.rho12 << "," << r.rho23 << "," << r.rho31;
    }
  }
}

TEST(Potentials, GeoChartAgreesWithRho) {
  std::mt19937_64 rng(32);
  const Potential V{AnharmonicPS{0.3, -0.2, 0.9}};
  for (int i = 0; i < 20; ++i) {
    const RhoPoint r = tbtest::random_triangle(rng);
    EXPECT_NEAR(V.value_geo(geo_from_rho(r)), V.value(r), 1e-13);
  }
  try {
    Potential{HarmonicChain{1.0, 1.0, 2.0, 3.0}}.value_geo({1.5, 0.1, 1.0});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRepresentationMismatch);
  }
}

TEST(Potentials, QuarticAtUnitEquilateral) {
  const auto q = newton_quartic_roots({1.5, 3.0 / 16.0, 1.0}, 1.0);
  const std::array<double, 5> coeff{1, 0, -6, 8, -3};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(q.coefficients[k], coeff[k], 1e-14);
  std::vector<double> re;
  for (const auto& z : q.roots) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-9);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -3.0, 1e-12);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(re[k], 1.0, 1e-9);
  // Lagrange value
  EXPECT_NEAR(re[0], -std::pow(3.0, 1.5) / std::sqrt(2.0 * 1.5), 1e-12);
}

TEST(Potentials, QuarticIsoscelesDiscriminant) {
  const auto q = newton_quartic_roots({4.5, 15.0 / 16.0, 16.0}, 1.0);
  EXPECT_EQ(q.discriminant_closed_form, 0.0);
  const double scale = 4096.0 * std::pow(16.0, 8) * std::pow(4.5, 6);
  EXPECT_LT(std::abs(q.discriminant_from_coefficients) / scale, 1e-10);
}

TEST(Potentials, QuarticSignInvariance) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const GeoPoint g = geo_from_rho(tbtest::random_triangle(rng));
    const double gamma = u(rng), V = u(rng);
    const double a = newton_quartic_residual(g, gamma, V), b = newton_quartic_residual(g, -gamma, -V);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(Potentials, QuarticRootsAreSignPatternSums) {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 200; ++i) {
    const RhoPoint r = tbtest::random_triangle(rng);
    const auto q = newton_quartic_roots(geo_from_rho(r), 1.3);
    EXPECT_TRUE(q.has_preimage);
    EXPECT_LT(q.max_label_error, 1e-9);
    for (auto l : q.labels) EXPECT_NE(l, CoulombLabel::kUnmatched);
    EXPECT_LT(tbtest::rel_err(q.discriminant_from_coefficients, q.discriminant_closed_form), 1e-9);
  }
}

TEST(Potentials, ScaleFamilyResidual) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  const double gamma = 1.4;
  ScaleFamily montgomery{[gamma](double z) { return -gamma * z; }, [gamma](double) { return -gamma; }, "montgomery"};
  for (const ScaleFamily& f : {montgomery, make_power_scale_family(1.0, 0.0), make_power_scale_family(1.0, 2.0)}) {
    for (int i = 0; i < 20; ++i) {
      const double P = u(rng), S = u(rng) * P * P / 40.0;
      const double V = Potential{f}.value_vol(P, S);
      EXPECT_NEAR(scale_family_check(f, P, S), 0.0, 1e-12 * std::max(1.0, std::abs(V)));
    }
  }
}

TEST(Potentials, Superintegrability) {
  EXPECT_EQ(superintegrability_class({1, 2, 3}, 2, 3, 6), SuperintegrabilityClass::kMaximal);
  EXPECT_EQ(superintegrability_class({1, 2, 3}, 2, 3, 1), SuperintegrabilityClass::kMinimal);
  EXPECT_EQ(superintegrability_class({1, 1, 1}, 1, 2, 3), SuperintegrabilityClass::kGeneric);
}
