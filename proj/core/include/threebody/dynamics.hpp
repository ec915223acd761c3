#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "threebody/hamiltonians.hpp"
#include "threebody/integrators.hpp"
#include "threebody/metrics.hpp"

namespace threebody {

struct FlowDerivative {
  Eigen::VectorXd q_dot;
  Eigen::VectorXd p_dot;
};

// Hamilton's equations: dq/dt = 2 G p (+ p_omega b), dp/dt = -d/dq H.
FlowDerivative flow_rhs(const HamiltonianSpec& spec, const PhaseState& s);

// Second-order form of the same flow in any representation, obtained by
// inverting dq/dt = 2 G p. DegenerateMetric when G is singular.
Eigen::VectorXd newton_rhs_generic(const HamiltonianSpec& spec, const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& q_dot);

// Closed-form second-order equations in (P,S,T) for unit masses.
Eigen::Vector3d newton_rhs_geo(const GeoPoint& g, const Eigen::Vector3d& v,
                               const Potential& V);
// Closed-form second-order equations in (P,S).
Eigen::Vector2d newton_rhs_vol(double P, double S, const Eigen::Vector2d& v,
                               const Potential& V);

// Point transformation of momenta, p_old = J^T p_new with J = dq_new/dq_old.
// Geo -> Rho returns the sorted preimage unless rho_labels supplies an ordering
// to follow.
PhaseState momentum_transform(Representation to, const PhaseState& s, const MassTriple& m,
                              const std::optional<RhoPoint>& rho_labels = std::nullopt);

// p = 1/2 G^{-1} q_dot.
Eigen::VectorXd momenta_from_velocities(Representation rep, const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& q_dot, const MassTriple& m);

// Closed-form velocity-to-momentum formula in the r chart, the squared area read
// as S; the other two components follow by cyclic relabeling.
Eigen::Vector3d p12g_stated(const SideLengths& r, const Eigen::Vector3d& r_dot,
                             const MassTriple& m);
// Closed-form P_T in terms of (P,S,T) velocities.
double pt_from_velocities_stated(const GeoPoint& g, const Eigen::Vector3d& v);
// Closed-form P_S in the volume chart.
double ps_from_velocities_stated(double P, double S, const Eigen::Vector2d& v);

struct TrajectoryOptions {
  std::vector<double> output_times;  // always recorded
  bool record_steps = true;          // also record every accepted step
  std::vector<std::string> monitors;  // "P_T", "P_S", "degeneracy"
};

struct Trajectory {
  Representation rep = Representation::kRho;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::VectorXd> p;
  std::vector<double> energy;
  std::map<std::string, std::vector<double>> monitors;
  std::vector<DegeneracyClass> degeneracy;
  IntegrationStats stats;

  double max_relative_energy_drift() const;
  // Linear lookup of the sample at time t (exact match required).
  std::size_t index_of(double t) const;
};

// P-only and Pm-only systems are advanced internally in the chart x = sqrt(P),
// p_x = 2 x P_P, which stays regular through P = 0.
Trajectory integrate(const HamiltonianSpec& spec, const PhaseState& s0, double t0, double t1,
                     const IntegratorSpec& integ, const TrajectoryOptions& opt = {});

struct NewtonTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::VectorXd> v;
};

// Integrates the closed-form (P,S,T) second-order system.
NewtonTrajectory integrate_newton_geo(const GeoPoint& g0, const Eigen::Vector3d& v0,
                                      const Potential& V, double t0, double t1,
                                      const IntegratorSpec& integ,
                                      const std::vector<double>& output_times);

// sup |monitor| over the trajectory.
double invariant_manifold_monitor(const Trajectory& traj, const std::string& name);

struct RepresentationConsistency {
  double H_rho = 0.0;
  double H_r = 0.0;
  std::optional<double> H_geo;
  bool geo_rejected = false;
  double max_relative_difference = 0.0;
  bool consistent = false;
};

// Evaluates the energy of a Rho state in the R chart and, for unit masses,
// the Geo chart, and compares them at 1e-12 relative.
RepresentationConsistency consistency_check_representations(const HamiltonianSpec& rho_spec,
                                                            const PhaseState& rho_state);

}  // namespace threebody
