#include <gtest/gtest.h>

#include "support.hpp"

using namespace threebody;

namespace {

void expect_rho(const RhoPoint& a, const RhoPoint& b, double tol = 1e-14) {
  EXPECT_NEAR(a.rho12, b.rho12, tol);
  EXPECT_NEAR(a.rho23, b.rho23, tol);
  EXPECT_NEAR(a.rho31, b.rho31, tol);
}

void expect_geo(const GeoPoint& a, const GeoPoint& b, double tol = 1e-12) {
  EXPECT_NEAR(a.P, b.P, tol);
  EXPECT_NEAR(a.S, b.S, tol);
  EXPECT_NEAR(a.T, b.T, tol);
}

void expect_code(ErrorCode code, const auto& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Geometry, SquaresOfSides) {
  expect_rho(rho_from_r({1, 1, 1}), {1, 1, 1});
  expect_rho(rho_from_r({3, 4, 5}), {9, 16, 25});
  expect_rho(rho_from_r({0, 2, 2}), {0, 4, 4});
}

TEST(Geometry, GeoFromRho) {
  expect_geo(geo_from_rho({1, 1, 1}), {1.5, 3.0 / 16.0, 1.0});
  expect_geo(geo_from_rho({9, 16, 25}), {25, 36, 3600});
  expect_geo(geo_from_rho({0, 4, 4}), {4, 0, 0});
}

TEST(Geometry, RhoFromGeo) {
  const auto eq = rho_from_geo({1.5, 3.0 / 16.0, 1.0});
  expect_rho(eq.sorted, {1, 1, 1}, 1e-7);  // triple root, resolved to eps^(1/3)
  EXPECT_EQ(eq.multiplicity, 1);
  const auto sc = rho_from_geo({25, 36, 3600});
  expect_rho(sc.sorted, {9, 16, 25}, 1e-10);
  EXPECT_EQ(sc.multiplicity, 6);
  const auto iso = rho_from_geo(geo_from_rho({4, 4, 1}));
  expect_rho(iso.sorted, {1, 4, 4}, 1e-6);
  EXPECT_EQ(iso.multiplicity, 3);
  expect_code(ErrorCode::kNoPhysicalPreimage, [] { rho_from_geo({1.5, 3.0 / 16.0, 2.0}); });
}

TEST(Geometry, RhoGeoRoundTripRandom) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const RhoPoint r = tbtest::random_triangle(rng);
    auto a = r.as_array();
    std::sort(a.begin(), a.end());
    const auto back = rho_from_geo(geo_from_rho(r)).sorted.as_array();
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(back[k], a[k], 1e-9 * a[2]);
  }
}

TEST(Geometry, CayleyMenger) {
  EXPECT_NEAR(area_sq_cayley_menger({9, 16, 25}).value, 36.0, 1e-12);
  EXPECT_TRUE(area_sq_cayley_menger({9, 16, 25}).physical);
  EXPECT_NEAR(area_sq_cayley_menger({1, 1, 1}).value, 3.0 / 16.0, 1e-15);
  // Sides 1, 2, 3 are collinear, so the squared area is exactly zero.
  const auto line = area_sq_cayley_menger({1, 4, 9});
  EXPECT_EQ(line.value, 0.0);
  EXPECT_TRUE(line.physical);
  // Sides 1, 1, 3 violate the triangle inequality.
  const auto bad = area_sq_cayley_menger({1, 1, 9});
  EXPECT_NEAR(bad.value, -45.0 / 16.0, 1e-14);
  EXPECT_FALSE(bad.physical);
}

TEST(Geometry, MomentOfInertia) {
  EXPECT_NEAR(moment_of_inertia({1, 1, 1}, {}), 1.0, 1e-15);
  EXPECT_NEAR(moment_of_inertia({9, 16, 25}, {}), 50.0 / 3.0, 1e-13);
  EXPECT_NEAR(moment_of_inertia({1, 1, 1}, {1, 2, 3}), 11.0 / 6.0, 1e-15);
}

TEST(Geometry, ModifiedVolume) {
  auto v = modified_volume({1, 1, 1}, {});
  EXPECT_NEAR(v.Pm, 1.5, 1e-15);
  EXPECT_NEAR(v.Sm, 3.0 / 16.0, 1e-15);
  v = modified_volume({9, 16, 25}, {1, 2, 3});
  EXPECT_NEAR(v.Pm, 63.0 / 4.0, 1e-13);
  EXPECT_NEAR(v.Sm, 108.0, 1e-12);
  v = modified_volume({0, 4, 4}, {2, 2, 2});
  EXPECT_NEAR(v.Pm, 2.0, 1e-15);
  EXPECT_NEAR(v.Sm, 0.0, 1e-15);
}

TEST(Geometry, JacobianMatchesHandForm) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const RhoPoint r = tbtest::random_triangle(rng);
    const auto J = geo_jacobian(r);
    const Eigen::Matrix3d ref = tbtest::geo_jacobian_by_hand(r);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) EXPECT_NEAR(J[a][b], ref(a, b), 1e-14 * (1 + std::abs(ref(a, b))));
    }
  }
}

TEST(Geometry, InvalidInput) {
  expect_code(ErrorCode::kInvalidArgument, [] { MassTriple(1, -1, 1); });
}
