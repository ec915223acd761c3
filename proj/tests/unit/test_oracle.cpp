#include <gtest/gtest.h>

#include "support.hpp"

using namespace threebody;

namespace {

IntegratorSpec tight(double tol) {
  IntegratorSpec s;
  s.abs_tol = tol;
  s.rel_tol = tol;
  return s;
}

double potential_energy(const Eigen::MatrixXd& x, const Potential& V) {
  CartesianState s{x, Eigen::MatrixXd::Zero(x.rows(), x.cols())};
  return V.value(rho_of(s));
}

}  // namespace

TEST(Oracle, FreeAccelerationIsZero) {
  const MassTriple m(1, 2, 3);
  const CartesianState s = zero_L_initial({1, 1.45, 2}, {0.1, 0.2, -0.1}, m, 2);
  EXPECT_EQ(cartesian_rhs(s, Potential{AnharmonicPS{}}, m).norm(), 0.0);
}

TEST(Oracle, EquilateralSpringsPullToCentroid) {
  const MassTriple m;
  const CartesianState s = zero_L_initial({1, 1, 1}, {0, 0, 0}, m, 2);
  const Eigen::MatrixXd a = cartesian_rhs(s, Potential{HarmonicChain{1.0, 1.0, 1.0, 1.0}}, m);
  const Eigen::RowVectorXd c = s.x.colwise().mean();
  for (int i = 0; i < 3; ++i) {
    const Eigen::RowVectorXd to_c = c - s.x.row(i);
    EXPECT_NEAR(a.row(i).normalized().dot(to_c.normalized()), 1.0, 1e-14);
    EXPECT_NEAR(a.row(i).norm(), a.row(0).norm(), 1e-14);
  }
}

TEST(Oracle, AccelerationMatchesEnergyGradient) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1, 1), um(0.5, 2);
  const Potential V{NewtonGravity{1.2}};
  for (int k = 0; k < 20; ++k) {
    const MassTriple m(um(rng), um(rng), um(rng));
    Eigen::MatrixXd x(3, 3);
    for (int i = 0; i < 9; ++i) x(i / 3, i % 3) = u(rng);
    const Eigen::MatrixXd a = cartesian_rhs({x, Eigen::MatrixXd::Zero(3, 3)}, V, m);
    const double mi[3] = {m.m1(), m.m2(), m.m3()};
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 3; ++c) {
        const double h = 1e-6;
        Eigen::MatrixXd up = x, dn = x;
        up(i, c) += h;
        dn(i, c) -= h;
        const double f = -(potential_energy(up, V) - potential_energy(dn, V)) / (2 * h) / mi[i];
        EXPECT_NEAR(a(i, c), f, 1e-7 * std::max(1.0, std::abs(f)));
      }
    }
  }
}

TEST(Oracle, ZeroAngularMomentumInitialData) {
  const MassTriple m(1, 1.5, 0.8);
  const CartesianState rest = zero_L_initial({1, 1.3, 1.2}, {0, 0, 0}, m, 3);
  EXPECT_EQ(rest.v.norm(), 0.0);
  for (int d : {2, 3, 4}) {
    const Eigen::Vector3d rate(0.15, -0.2, 0.17);
    const CartesianState s = zero_L_initial({1, 1.3, 1.2}, rate, m, d);
    EXPECT_EQ(s.dim(), d);
    for (double l : angular_momentum(s, m)) EXPECT_LT(std::abs(l), 1e-12);
    EXPECT_LE((rho_dot_of(s) - rate).cwiseAbs().maxCoeff(), 1e-12);
    const RhoPoint r = rho_of(s);
    EXPECT_NEAR(r.rho12, 1.0, 1e-14);
    EXPECT_NEAR(r.rho23, 1.3, 1e-14);
    EXPECT_NEAR(r.rho31, 1.2, 1e-14);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < 3; ++i) p += m.values()[i] * s.v.row(i).transpose();
    EXPECT_LT(p.norm(), 1e-14);
  }
}

TEST(Oracle, RotationKeepsInvariants) {
  const MassTriple m(1, 2, 3);
  const CartesianState s = zero_L_initial({1, 1.3, 1.2}, {0.1, 0.2, 0.3}, m, 4);
  const Eigen::MatrixXd Q = random_rotation(4, 9);
  EXPECT_LE((Q.transpose() * Q - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
  const CartesianState r = rotate(s, Q);
  EXPECT_LE((rho_dot_of(r) - rho_dot_of(s)).cwiseAbs().maxCoeff(), 1e-14);
  for (double l : angular_momentum(r, m)) EXPECT_LT(std::abs(l), 1e-13);
}

TEST(Oracle, RestEquilateralStaysPut) {
  const MassTriple m;
  const Potential V{AnharmonicPS{}};
  const auto traj = integrate_cartesian(zero_L_initial({1, 1, 1}, {0, 0, 0}, m, 2), V, m, 0, 1, tight(1e-12), {0.5, 1.0});
  const auto red = reduce_trajectory(traj, m, V);
  for (const auto& r : red.rho) {
    EXPECT_EQ(r.rho12, red.rho.front().rho12);
    EXPECT_EQ(r.rho23, red.rho.front().rho23);
  }
}

TEST(Oracle, HarmonicChainConservesEnergy) {
  const MassTriple m(1, 1.5, 0.8);
  const Potential V{HarmonicChain{0.5, 1.0, 0.7, 1.3}};
  const auto traj = integrate_cartesian(zero_L_initial({1, 1.3, 1.2}, {0.15, 0.2, 0.17}, m, 2), V, m, 0, 10,
                                        tight(1e-12), {2.5, 5.0, 7.5, 10.0}, true);
  const auto red = reduce_trajectory(traj, m, V);
  for (double e : red.energy) EXPECT_LT(tbtest::rel_err(e, red.energy.front()), 1e-9);
}

TEST(Oracle, GravityPassesThroughCollinear) {
  // Body 3 crosses the line of bodies 1 and 2; zero momentum and zero L by symmetry.
  const MassTriple m;
  const Potential V{NewtonGravity{1.0}};
  Eigen::MatrixXd x(3, 2), vel(3, 2);
  x << -1.0, 0.0, 1.0, 0.0, 0.0, 0.3;
  vel << 0.0, 0.5, 0.0, 0.5, 0.0, -1.0;
  x.rowwise() -= x.colwise().mean();
  const CartesianState s0{x, vel};
  for (double l : angular_momentum(s0, m)) EXPECT_EQ(l, 0.0);
  const auto traj = integrate_cartesian(s0, V, m, 0, 0.6, tight(1e-12), {}, true);
  const auto red = reduce_trajectory(traj, m, V);
  double min_shape = 1e300;
  int flips = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < red.geo.size(); ++i) {
    const auto& xs = traj.states[i].x;
    const Eigen::Vector2d e1 = (xs.row(1) - xs.row(0)).transpose(), e2 = (xs.row(2) - xs.row(0)).transpose();
    const double signed_area = e1.x() * e2.y() - e1.y() * e2.x();
    if (i && (signed_area > 0) != (prev > 0)) ++flips;
    prev = signed_area;
    min_shape = std::min(min_shape, red.geo[i].S / (red.geo[i].P * red.geo[i].P));
    EXPECT_TRUE(red.physical[i]);
  }
  EXPECT_EQ(flips, 1);
  EXPECT_LT(min_shape, 1e-3);
}
