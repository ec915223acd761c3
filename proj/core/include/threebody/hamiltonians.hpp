#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "threebody/geometry.hpp"
#include "threebody/potentials.hpp"

namespace threebody {

// R: mutual distances. Rho: squared distances. Geo: (P,S,T), unit masses.
// Vol: (P,S), unit masses. VolM: (Pm,Sm). POnly: P. PmOnly: Pm.
enum class Representation { kR, kRho, kGeo, kVol, kVolM, kPOnly, kPmOnly };

const char* to_string(Representation r);
Representation representation_from_string(const std::string& s);
int dimension(Representation r);

// Kinetic energy is p^T G(q) p with no factor 1/2, so dq/dt = 2 G p.
struct HamiltonianSpec {
  Representation rep = Representation::kRho;
  MassTriple masses;
  Potential potential;
  double p_omega = 0.0;  // honored for R and Rho only

  void validate() const;
};

struct PhaseState {
  Representation rep = Representation::kRho;
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

Eigen::MatrixXd kinetic_cometric(const HamiltonianSpec& spec, const Eigen::VectorXd& q);
std::vector<Eigen::MatrixXd> kinetic_cometric_gradient(const HamiltonianSpec& spec,
                                                       const Eigen::VectorXd& q);

// Coefficient vector b(q) of the p_omega-linear term p_omega * b . p (zero
// outside R/Rho) and its Jacobian db_i/dq_k.
Eigen::VectorXd pomega_linear_coefficients(const HamiltonianSpec& spec,
                                           const Eigen::VectorXd& q);
Eigen::MatrixXd pomega_linear_jacobian(const HamiltonianSpec& spec,
                                       const Eigen::VectorXd& q);

// V plus the p_omega^2 correction where applicable.
double effective_potential(const HamiltonianSpec& spec, const Eigen::VectorXd& q);
Eigen::VectorXd effective_potential_gradient(const HamiltonianSpec& spec,
                                             const Eigen::VectorXd& q);

double kinetic_energy(const HamiltonianSpec& spec, const PhaseState& s);
double eval_H(const HamiltonianSpec& spec, const PhaseState& s);

// Energy A^2 k^2 / (B (1-k^2)^2) of the sn^2 solution.
double eval_H_anharmonic_energy(double A, double B, double k);
// Energy c1 A of the cos^2 solution.
double eval_H_harmonic_energy(double A, double c1);

// The stated p_omega-linear coefficients versus their images under the
// cyclic relabeling 1->2->3->1 applied to the first term.
struct PomegaCyclicReport {
  Eigen::Vector3d stated;
  Eigen::Vector3d cyclic;
  double max_relative_difference = 0.0;
  bool consistent = false;
};

PomegaCyclicReport pomega_cyclic_diagnostic(Representation rep, const Eigen::Vector3d& q,
                                            const MassTriple& m);

}  // namespace threebody
