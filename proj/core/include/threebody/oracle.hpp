#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "threebody/geometry.hpp"
#include "threebody/integrators.hpp"
#include "threebody/potentials.hpp"

namespace threebody {

// Rows are bodies, columns are spatial axes.
struct CartesianState {
  Eigen::MatrixXd x;
  Eigen::MatrixXd v;

  int dim() const { return static_cast<int>(x.cols()); }
};

// Components L_ab, a < b, in lexicographic order.
std::vector<double> angular_momentum(const CartesianState& s, const MassTriple& m);
RhoPoint rho_of(const CartesianState& s);
// d rho_ij / dt.
Eigen::Vector3d rho_dot_of(const CartesianState& s);
double total_energy(const CartesianState& s, const MassTriple& m, const Potential& V);

// a_i = -(1/m_i) sum_j 2 (x_i - x_j) dV/drho_ij
Eigen::MatrixXd cartesian_rhs(const CartesianState& s, const Potential& V, const MassTriple& m);

// Planar embedding (body 1 at the origin, body 2 on the first axis, body 3 in
// the upper half plane, then shifted to the center of mass) with the
// minimal-norm velocities giving zero momentum, zero angular momentum and the
// requested rho rates. Throws Infeasible if no such velocities exist.
CartesianState zero_L_initial(const RhoPoint& rho0, const Eigen::Vector3d& rho_dot0,
                              const MassTriple& m, int d);

// Orthogonal d x d matrix drawn from a seeded Gaussian QR.
Eigen::MatrixXd random_rotation(int d, std::uint64_t seed);
CartesianState rotate(const CartesianState& s, const Eigen::MatrixXd& Q);

struct CartesianTrajectory {
  std::vector<double> times;
  std::vector<CartesianState> states;
  IntegrationStats stats;
};

CartesianTrajectory integrate_cartesian(const CartesianState& s0, const Potential& V,
                                        const MassTriple& m, double t0, double t1,
                                        const IntegratorSpec& integ,
                                        const std::vector<double>& output_times,
                                        bool record_steps = false);

struct ReducedSeries {
  std::vector<double> times;
  std::vector<RhoPoint> rho;
  std::vector<GeoPoint> geo;
  std::vector<ModifiedVolumePoint> volume;
  std::vector<std::vector<double>> angular;
  std::vector<double> energy;
  std::vector<bool> physical;  // Cayley-Menger sign flag
};

ReducedSeries reduce_trajectory(const CartesianTrajectory& traj, const MassTriple& m,
                                const Potential& V);

}  // namespace threebody
