#include <gtest/gtest.h>

#include "support.hpp"

using namespace threebody;

namespace {

Eigen::VectorXd v(std::initializer_list<double> x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
  Eigen::Index i = 0;
  for (double e : x) out[i++] = e;
  return out;
}

}  // namespace

TEST(Hamiltonians, Examples) {
  const HamiltonianSpec rho{Representation::kRho, {}, Potential{AnharmonicPS{}}, 0.0};
  EXPECT_NEAR(eval_H(rho, {Representation::kRho, v({1, 1, 1}), v({1, 0, 0})}), 4.0, 1e-15);
  const HamiltonianSpec geo{Representation::kGeo, {}, Potential{AnharmonicPS{}}, 0.0};
  EXPECT_NEAR(eval_H(geo, {Representation::kGeo, v({1.5, 3.0 / 16.0, 1}), v({1, 0, 0})}), 4.5, 1e-15);
  const HamiltonianSpec vol{Representation::kVol, {}, Potential{AnharmonicPS{3.0, 0, 0}}, 0.0};
  EXPECT_NEAR(eval_H(vol, {Representation::kVol, v({2, 1}), v({0, 0})}), 6.0, 1e-15);
}

TEST(Hamiltonians, ClosedFormEnergies) {
  EXPECT_NEAR(eval_H_anharmonic_energy(1, 1, 0.5), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(eval_H_anharmonic_energy(2, 1, 1e-9), 0.0, 1e-15);
  EXPECT_NEAR(eval_H_harmonic_energy(3, 2), 6.0, 1e-15);
}

TEST(Hamiltonians, KineticMatchesCartesian) {
  // Momenta conjugate to rho pulled back to Cartesian momenta p_i = sum_a P_a grad_i rho_a.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1, 1), um(0.5, 2);
  for (int i = 0; i < 50; ++i) {
    const RhoPoint r = tbtest::random_triangle(rng);
    const MassTriple m(um(rng), um(rng), um(rng));
    const Eigen::Vector3d P(u(rng), u(rng), u(rng));
    const auto x = tbtest::embed(r);
    Eigen::Matrix<double, 3, 2> p = Eigen::Matrix<double, 3, 2>::Zero();
    const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (int a = 0; a < 3; ++a) {
      const auto d = (2.0 * (x.row(pairs[a][0]) - x.row(pairs[a][1]))).eval();
      p.row(pairs[a][0]) += P[a] * d;
      p.row(pairs[a][1]) -= P[a] * d;
    }
    const double t_cart = p.row(0).squaredNorm() / (2 * m.m1()) + p.row(1).squaredNorm() / (2 * m.m2()) +
                          p.row(2).squaredNorm() / (2 * m.m3());
    const HamiltonianSpec spec{Representation::kRho, m, Potential{AnharmonicPS{}}, 0.0};
    EXPECT_LT(tbtest::rel_err(kinetic_energy(spec, {Representation::kRho, v({r.rho12, r.rho23, r.rho31}), P}), t_cart), 1e-12);
  }
}

TEST(Hamiltonians, ConsistencyAcrossCharts) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  const HamiltonianSpec spec{Representation::kRho, {}, Potential{AnharmonicPS{0.4, 0.1, -0.3}}, 0.0};
  for (int i = 0; i < 20; ++i) {
    const RhoPoint r = tbtest::random_triangle(rng);
    const PhaseState s{Representation::kRho, v({r.rho12, r.rho23, r.rho31}), v({u(rng), u(rng), u(rng)})};
    const auto rep = consistency_check_representations(spec, s);
    EXPECT_TRUE(rep.consistent) << rep.max_relative_difference;
    ASSERT_TRUE(rep.H_geo.has_value());
  }
  // Zero momentum: every chart returns V.
  const PhaseState rest{Representation::kRho, v({1, 1.45, 2}), v({0, 0, 0})};
  const auto rep = consistency_check_representations(spec, rest);
  EXPECT_NEAR(rep.H_rho, spec.potential.value({1, 1.45, 2}), 1e-15);
  EXPECT_NEAR(rep.H_r, rep.H_rho, 1e-14);
  // Collinear: R and Rho agree, the Geo transform is refused.
  const PhaseState line{Representation::kRho, v({1, 4, 9}), v({0.3, -0.2, 0.1})};
  const auto lrep = consistency_check_representations(spec, line);
  EXPECT_TRUE(lrep.geo_rejected);
  EXPECT_NEAR(lrep.H_r, lrep.H_rho, 1e-12 * std::abs(lrep.H_rho));
}

TEST(Hamiltonians, PomegaTermsOnlyInRAndRho) {
  const HamiltonianSpec geo{Representation::kGeo, {}, Potential{AnharmonicPS{}}, 0.7};
  EXPECT_EQ(pomega_linear_coefficients(geo, v({1.5, 0.1, 1.0})).norm(), 0.0);
  const auto diag = pomega_cyclic_diagnostic(Representation::kRho, {1.0, 1.3, 1.7}, {1, 2, 3});
  EXPECT_GE(diag.max_relative_difference, 0.0);
}
