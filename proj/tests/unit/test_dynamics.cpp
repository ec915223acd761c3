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

IntegratorSpec tight(double tol) {
  IntegratorSpec s;
  s.abs_tol = tol;
  s.rel_tol = tol;
  return s;
}

}  // namespace

TEST(Dynamics, FreeRestState) {
  for (auto rep : {Representation::kR, Representation::kRho, Representation::kGeo, Representation::kVol}) {
    const HamiltonianSpec spec{rep, {}, Potential{AnharmonicPS{}}, 0.0};
    const int n = dimension(rep);
    Eigen::VectorXd q = n == 3 ? v({1.0, 1.2, 1.4}) : v({2.0, 0.1});
    if (rep == Representation::kGeo) q = v({2.225, 0.34984375, 2.9});
    const auto d = flow_rhs(spec, {rep, q, Eigen::VectorXd::Zero(n)});
    EXPECT_EQ(d.q_dot.norm(), 0.0);
    EXPECT_EQ(d.p_dot.norm(), 0.0);
  }
}

TEST(Dynamics, GeoPTStaysZeroForPSPotential) {
  const HamiltonianSpec spec{Representation::kGeo, {}, Potential{AnharmonicPS{0.3, 0.2, -0.5}}, 0.0};
  const auto d = flow_rhs(spec, {Representation::kGeo, v({2.225, 0.34984375, 2.9}), v({0.3, -0.7, 0.0})});
  EXPECT_EQ(d.p_dot[2], 0.0);
}

TEST(Dynamics, NewtonGeoAtRestLinearPotential) {
  const double A = 0.37;
  const GeoPoint g = geo_from_rho({1, 1.45, 2});
  const Eigen::Vector3d acc = newton_rhs_geo(g, Eigen::Vector3d::Zero(), Potential{AnharmonicPS{A, 0, 0}});
  EXPECT_NEAR(acc[0], -6 * A * g.P, 1e-13);
}

TEST(Dynamics, NewtonGeoMatchesGenericInversion) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1, 1);
  const Potential V{AnharmonicPS{0.3, 0.2, -0.5}};
  const HamiltonianSpec spec{Representation::kGeo, {}, V, 0.0};
  for (int i = 0; i < 50; ++i) {
    const GeoPoint g = geo_from_rho(tbtest::random_triangle(rng));
    const Eigen::Vector3d vel(u(rng), u(rng), u(rng));
    const Eigen::Vector3d a = newton_rhs_geo(g, vel, V);
    const Eigen::VectorXd b = newton_rhs_generic(spec, v({g.P, g.S, g.T}), vel);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff()));
  }
  try {
    newton_rhs_geo({4.5, 15.0 / 16.0, 16}, Eigen::Vector3d::Zero(), V);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateMetric);
  }
}

TEST(Dynamics, MomentumTransforms) {
  const PhaseState r{Representation::kR, v({2, 3, 4}), v({1, 1, 1})};
  const auto rho = momentum_transform(Representation::kRho, r, {});
  EXPECT_NEAR(rho.p[0], 0.25, 1e-15);
  EXPECT_NEAR(rho.p[1], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(rho.p[2], 0.125, 1e-15);
  EXPECT_NEAR(rho.q[2], 16.0, 1e-15);

  const auto same = momentum_transform(Representation::kR, r, {});
  EXPECT_EQ(same.q, r.q);
  EXPECT_EQ(same.p, r.p);

  const RhoPoint labels{1.0, 1.45, 2.0};
  const PhaseState s{Representation::kRho, v({1.0, 1.45, 2.0}), v({0.3, -0.1, 0.7})};
  const auto geo = momentum_transform(Representation::kGeo, s, {});
  const auto back = momentum_transform(Representation::kRho, geo, {}, labels);
  EXPECT_LE((back.q - s.q).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((back.p - s.p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Dynamics, MomentaFromVelocities) {
  EXPECT_EQ(momenta_from_velocities(Representation::kRho, v({1, 1.45, 2}), v({0, 0, 0}), {}).norm(), 0.0);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    const GeoPoint g = geo_from_rho(tbtest::random_triangle(rng));
    const Eigen::Vector3d vel(u(rng), u(rng), u(rng));
    const auto p = momenta_from_velocities(Representation::kGeo, v({g.P, g.S, g.T}), vel, {});
    EXPECT_LT(std::abs(p[2] - pt_from_velocities_stated(g, vel)), 1e-10 * std::max(1.0, p.cwiseAbs().maxCoeff()));
    const Eigen::Vector2d vv(vel[0], vel[1]);
    const auto ps = momenta_from_velocities(Representation::kVol, v({g.P, g.S}), vv, {});
    EXPECT_LT(std::abs(ps[1] - ps_from_velocities_stated(g.P, g.S, vv)), 1e-10 * std::max(1.0, ps.cwiseAbs().maxCoeff()));
  }
  // The stated r-chart formula with the squared area read as S.
  const SideLengths s{1.0, 1.2, 1.5};
  const Eigen::Vector3d rd(0.3, -0.4, 0.2);
  const auto p = momenta_from_velocities(Representation::kR, v({1.0, 1.2, 1.5}), rd, {1, 2, 3});
  const Eigen::Vector3d stated = p12g_stated(s, rd, {1, 2, 3});
  EXPECT_LE((p - stated).cwiseAbs().maxCoeff(), 1e-12 * p.cwiseAbs().maxCoeff());
}

TEST(Dynamics, FreeVolumeFlowConservesEnergy) {
  const HamiltonianSpec spec{Representation::kVol, {}, Potential{AnharmonicPS{}}, 0.0};
  const Trajectory t = integrate(spec, {Representation::kVol, v({2.225, 0.35}), v({0.05, 0.1})}, 0.0, 0.5, tight(1e-12));
  EXPECT_LT(t.max_relative_energy_drift(), 1e-12);
}

TEST(Dynamics, InvariantManifoldMonitors) {
  const Eigen::VectorXd q0 = v({2.225, 0.34984375, 2.9});
  TrajectoryOptions opt;
  opt.monitors = {"P_T", "P_S"};
  // V(P) with P_S = P_T = 0: a pure dilation that keeps both momenta at zero.
  const HamiltonianSpec p_only{Representation::kGeo, {}, Potential{AnharmonicPS{-0.01, 0.001, 0.0}}, 0.0};
  const Trajectory a = integrate(p_only, {Representation::kGeo, q0, v({0.05, 0.0, 0.0})}, 0, 10, tight(1e-10), opt);
  EXPECT_LT(invariant_manifold_monitor(a, "P_T"), 1e-9);
  EXPECT_LT(invariant_manifold_monitor(a, "P_S"), 1e-9);
  // dV/dT != 0 breaks the manifold.
  const HamiltonianSpec control{Representation::kGeo, {}, Potential{Lemniscate{}}, 0.0};
  const Trajectory b = integrate(control, {Representation::kGeo, q0, v({0.05, 0.01, 0.0})}, 0, 1, tight(1e-10), opt);
  EXPECT_GT(invariant_manifold_monitor(b, "P_T"), 1e-3);
}

TEST(Dynamics, POnlyFlowReachesCollision) {
  // Harmonic P-only motion passes through P = 0 every half period.
  const double A = 3.0;
  const HamiltonianSpec spec{Representation::kPOnly, {}, Potential{AnharmonicPS{A, 0, 0}}, 0.0};
  TrajectoryOptions opt;
  opt.record_steps = false;
  opt.output_times = {M_PI / 6.0, M_PI / 3.0};
  const Trajectory t = integrate(spec, {Representation::kPOnly, v({2.0}), v({0.0})}, 0.0, M_PI / 3.0, tight(1e-12), opt);
  EXPECT_NEAR(t.q[t.index_of(M_PI / 6.0)][0], 0.0, 1e-10);
  EXPECT_NEAR(t.q.back()[0], 2.0, 1e-9);
}

TEST(Dynamics, IntegratorMethodsAgree) {
  const HamiltonianSpec spec{Representation::kVol, {}, Potential{AnharmonicPS{-0.01, 0, 0.002}}, 0.0};
  const PhaseState s0{Representation::kVol, v({2.225, 0.35}), v({0.05, 0.01})};
  TrajectoryOptions opt;
  opt.record_steps = false;
  opt.output_times = {2.0};
  const auto ref = integrate(spec, s0, 0, 2, tight(1e-12), opt);
  for (auto m : {IntegratorMethod::kRK4Fixed, IntegratorMethod::kImplicitMidpoint}) {
    IntegratorSpec is;
    is.method = m;
    is.step = 1e-3;
    const auto t = integrate(spec, s0, 0, 2, is, opt);
    EXPECT_LE((t.q.back() - ref.q.back()).cwiseAbs().maxCoeff(), 1e-6) << to_string(m);
  }
}

TEST(Dynamics, HugeFixedStepFails) {
  const HamiltonianSpec spec{Representation::kRho, {}, Potential{NewtonGravity{1.0}}, 0.0};
  IntegratorSpec is;
  is.method = IntegratorMethod::kRK4Fixed;
  is.step = 5.0;
  try {
    integrate(spec, {Representation::kRho, v({1, 1.2, 1.5}), v({0, 0, 0})}, 0, 50, is);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStepFailure);
  }
}
