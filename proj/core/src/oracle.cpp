#include "threebody/oracle.hpp"

#include <cmath>
#include <random>
#include <set>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

constexpr int kPairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};

Eigen::VectorXd flatten(const CartesianState& s) {
  const int d = s.dim();
  Eigen::VectorXd y(6 * d);
  for (int i = 0; i < 3; ++i) {
    y.segment(i * d, d) = s.x.row(i).transpose();
    y.segment(3 * d + i * d, d) = s.v.row(i).transpose();
  }
  return y;
}

CartesianState unflatten(const Eigen::VectorXd& y, int d) {
  CartesianState s{Eigen::MatrixXd(3, d), Eigen::MatrixXd(3, d)};
  for (int i = 0; i < 3; ++i) {
    s.x.row(i) = y.segment(i * d, d).transpose();
    s.v.row(i) = y.segment(3 * d + i * d, d).transpose();
  }
  return s;
}

}  // namespace

std::vector<double> angular_momentum(const CartesianState& s, const MassTriple& m) {
  const int d = s.dim();
  std::vector<double> L;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        acc += m.values()[i] * (s.x(i, a) * s.v(i, b) - s.x(i, b) * s.v(i, a));
      }
      L.push_back(acc);
    }
  }
  return L;
}

RhoPoint rho_of(const CartesianState& s) {
  std::array<double, 3> r{};
  for (int k = 0; k < 3; ++k) {
    r[k] = (s.x.row(kPairs[k][0]) - s.x.row(kPairs[k][1])).squaredNorm();
  }
  return RhoPoint::from_array(r);
}

Eigen::Vector3d rho_dot_of(const CartesianState& s) {
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) {
    const int i = kPairs[k][0], j = kPairs[k][1];
    out[k] = 2.0 * (s.x.row(i) - s.x.row(j)).dot(s.v.row(i) - s.v.row(j));
  }
  return out;
}

double total_energy(const CartesianState& s, const MassTriple& m, const Potential& V) {
  double kin = 0.0;
  for (int i = 0; i < 3; ++i) kin += 0.5 * m.values()[i] * s.v.row(i).squaredNorm();
  return kin + V.value(rho_of(s));
}

Eigen::MatrixXd cartesian_rhs(const CartesianState& s, const Potential& V, const MassTriple& m) {
  const Eigen::Vector3d dV = V.gradient(rho_of(s));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, s.dim());
  for (int k = 0; k < 3; ++k) {
    const int i = kPairs[k][0], j = kPairs[k][1];
    const Eigen::RowVectorXd f = 2.0 * dV[k] * (s.x.row(i) - s.x.row(j));
    a.row(i) -= f;
    a.row(j) += f;
  }
  for (int i = 0; i < 3; ++i) a.row(i) /= m.values()[i];
  return a;
}

CartesianState zero_L_initial(const RhoPoint& rho0, const Eigen::Vector3d& rho_dot0,
                              const MassTriple& m, int d) {
  if (d < 2) fail(ErrorCode::kInvalidArgument, "dimension must be at least 2");
  if (!area_sq_cayley_menger(rho0).physical || rho0.rho12 <= 0.0) {
    fail(ErrorCode::kInvalidArgument, "initial triangle is not physical");
  }
  const double r12 = std::sqrt(rho0.rho12);
  const double x3 = (rho0.rho12 + rho0.rho31 - rho0.rho23) / (2.0 * r12);
  const double y3 = std::sqrt(std::max(0.0, rho0.rho31 - x3 * x3));

  CartesianState s{Eigen::MatrixXd::Zero(3, d), Eigen::MatrixXd::Zero(3, d)};
  s.x(1, 0) = r12;
  s.x(2, 0) = x3;
  s.x(2, 1) = y3;
  Eigen::RowVectorXd com = Eigen::RowVectorXd::Zero(d);
  for (int i = 0; i < 3; ++i) com += m.values()[i] * s.x.row(i);
  com /= m.total();
  for (int i = 0; i < 3; ++i) s.x.row(i) -= com;

  // Unknowns: v_{i,a} at column i*d + a.
  const int n = 3 * d;
  const int n_l = d * (d - 1) / 2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + n_l + 3, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + n_l + 3);
  int row = 0;
  for (int a = 0; a < d; ++a, ++row) {
    for (int i = 0; i < 3; ++i) A(row, i * d + a) = m.values()[i];
  }
  for (int a = 0; a < d; ++a) {
    for (int c = a + 1; c < d; ++c, ++row) {
      for (int i = 0; i < 3; ++i) {
        A(row, i * d + c) += m.values()[i] * s.x(i, a);
        A(row, i * d + a) -= m.values()[i] * s.x(i, c);
      }
    }
  }
  for (int k = 0; k < 3; ++k, ++row) {
    const int i = kPairs[k][0], j = kPairs[k][1];
    for (int a = 0; a < d; ++a) {
      const double dx = 2.0 * (s.x(i, a) - s.x(j, a));
      A(row, i * d + a) += dx;
      A(row, j * d + a) -= dx;
    }
    b[row] = rho_dot0[k];
  }

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd v = cod.solve(b);
  const double resid = (A * v - b).norm();
  const double scale = 1.0 + b.norm() + A.norm() * v.norm();
  if (!(resid <= 1e-10 * scale)) {
    fail(ErrorCode::kInfeasible, "no zero angular momentum velocities for these rates");
  }
  for (int i = 0; i < 3; ++i) s.v.row(i) = v.segment(i * d, d).transpose();
  return s;
}

Eigen::MatrixXd random_rotation(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd Q = qr.householderQ();
  // Fix column signs so the factorization is unique.
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  }
  return Q;
}

CartesianState rotate(const CartesianState& s, const Eigen::MatrixXd& Q) {
  return {s.x * Q.transpose(), s.v * Q.transpose()};
}

CartesianTrajectory integrate_cartesian(const CartesianState& s0, const Potential& V,
                                        const MassTriple& m, double t0, double t1,
                                        const IntegratorSpec& integ,
                                        const std::vector<double>& output_times,
                                        bool record_steps) {
  const int d = s0.dim();
  Eigen::VectorXd y = flatten(s0);
  const OdeRhs rhs = [&](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
    const CartesianState s = unflatten(yy, d);
    const Eigen::MatrixXd a = cartesian_rhs(s, V, m);
    dy.resize(yy.size());
    for (int i = 0; i < 3; ++i) {
      dy.segment(i * d, d) = s.v.row(i).transpose();
      dy.segment(3 * d + i * d, d) = a.row(i).transpose();
    }
  };
  CartesianTrajectory out;
  const std::set<double> outputs(output_times.begin(), output_times.end());
  auto record = [&](double t, const Eigen::VectorXd& yy) {
    if (!record_steps && t != t0 && !outputs.count(t)) return;
    out.times.push_back(t);
    out.states.push_back(unflatten(yy, d));
  };
  out.stats = integrate_ode(rhs, y, t0, t1, integ, record, output_times);
  return out;
}

ReducedSeries reduce_trajectory(const CartesianTrajectory& traj, const MassTriple& m,
                                const Potential& V) {
  ReducedSeries out;
  out.times = traj.times;
  for (const auto& s : traj.states) {
    const RhoPoint rho = rho_of(s);
    out.rho.push_back(rho);
    out.geo.push_back(geo_from_rho(rho));
    out.volume.push_back(modified_volume(rho, m));
    out.angular.push_back(angular_momentum(s, m));
    out.energy.push_back(total_energy(s, m, V));
    out.physical.push_back(area_sq_cayley_menger(rho).physical);
  }
  return out;
}

}  // namespace threebody
