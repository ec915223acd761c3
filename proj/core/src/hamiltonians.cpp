#include "threebody/hamiltonians.hpp"

#include <cmath>

#include <unsupported/Eigen/AutoDiff>

#include "threebody/errors.hpp"
#include "threebody/metrics.hpp"

namespace threebody {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Vector3d>;

template <class Scalar>
Scalar area_from_sq(const Scalar& a, const Scalar& b, const Scalar& c) {
  using std::sqrt;
  const Scalar S = (2 * a * b + 2 * a * c + 2 * b * c - a * a - b * b - c * c) / 16;
  return S > Scalar(0) ? Scalar(sqrt(S)) : Scalar(0);
}

// Closed-form p_omega-linear coefficients. For the r chart the arguments are the
// side lengths, for the rho chart the squared lengths.
template <class Scalar>
Eigen::Matrix<Scalar, 3, 1> linear_coeff_r(const Eigen::Matrix<Scalar, 3, 1>& r,
                                           double m1, double m2, double m3) {
  const Scalar a = r[0] * r[0], b = r[1] * r[1], c = r[2] * r[2];
  const Scalar k = Scalar(2.0 / 3.0) * area_from_sq(a, b, c);
  Eigen::Matrix<Scalar, 3, 1> out;
  out[0] = k * (m1 * c - m2 * b) / (m1 * m2 * r[0] * b * c);
  out[1] = k * (m2 * a - m3 * c) / (m2 * m3 * r[1] * a * c);
  out[2] = k * (m3 * b - m1 * a) / (m1 * m3 * r[2] * b * c);
  return out;
}

template <class Scalar>
Eigen::Matrix<Scalar, 3, 1> linear_coeff_rho(const Eigen::Matrix<Scalar, 3, 1>& x,
                                             double m1, double m2, double m3) {
  const Scalar &a = x[0], &b = x[1], &c = x[2];
  const Scalar k = Scalar(4.0 / 3.0) * area_from_sq(a, b, c);
  Eigen::Matrix<Scalar, 3, 1> out;
  out[0] = k * (m1 * c - m2 * b) / (m1 * m2 * b * c);
  out[1] = k * (m2 * a - m3 * c) / (m2 * m3 * a * c);
  out[2] = k * (m3 * b - m1 * a) / (m1 * m3 * b * c);
  return out;
}

// Bracket multiplying p_omega^2 / 9, written in squared lengths.
template <class Scalar>
Scalar centrifugal(const Scalar& a, const Scalar& b, const Scalar& c, const MassTriple& m) {
  return (1.0 / (m.m12() * a) + 1.0 / (m.m23() * b) + 1.0 / (m.m31() * c) -
          a / (2.0 * m.m3() * b * c) - b / (2.0 * m.m1() * a * c) -
          c / (2.0 * m.m2() * a * b)) /
         9.0;
}

Eigen::Matrix<AD, 3, 1> seeded(const Eigen::VectorXd& q) {
  Eigen::Matrix<AD, 3, 1> x;
  for (int i = 0; i < 3; ++i) x[i] = AD(q[i], 3, i);
  return x;
}

void check_dim(const HamiltonianSpec& spec, const Eigen::VectorXd& q) {
  if (q.size() != dimension(spec.rep)) {
    fail(ErrorCode::kRepresentationMismatch, "state dimension does not match representation");
  }
}

double derivative_or_zero(const AD& v, int k) {
  return v.derivatives().size() == 3 ? v.derivatives()[k] : 0.0;
}

}  // namespace

const char* to_string(Representation r) {
  switch (r) {
    case Representation::kR: return "R";
    case Representation::kRho: return "Rho";
    case Representation::kGeo: return "Geo";
    case Representation::kVol: return "Vol";
    case Representation::kVolM: return "VolM";
    case Representation::kPOnly: return "POnly";
    case Representation::kPmOnly: return "PmOnly";
  }
  return "unknown";
}

Representation representation_from_string(const std::string& s) {
  for (auto r : {Representation::kR, Representation::kRho, Representation::kGeo,
                 Representation::kVol, Representation::kVolM, Representation::kPOnly,
                 Representation::kPmOnly}) {
    if (s == to_string(r)) return r;
  }
  fail(ErrorCode::kInvalidArgument, "unknown representation '" + s + "'");
}

int dimension(Representation r) {
  switch (r) {
    case Representation::kR:
    case Representation::kRho:
    case Representation::kGeo: return 3;
    case Representation::kVol:
    case Representation::kVolM: return 2;
    case Representation::kPOnly:
    case Representation::kPmOnly: return 1;
  }
  return 0;
}

void HamiltonianSpec::validate() const {
  if (p_omega != 0.0 && rep != Representation::kR && rep != Representation::kRho) {
    fail(ErrorCode::kInvalidArgument, "p_omega is only defined for R and Rho");
  }
  const bool unit_only = rep == Representation::kGeo || rep == Representation::kVol ||
                         rep == Representation::kPOnly;
  if (unit_only && !masses.is_unit()) {
    fail(ErrorCode::kInvalidArgument,
         std::string(to_string(rep)) + " representation requires unit masses");
  }
  if (const auto* v = std::get_if<VolumeMass>(&potential.spec())) {
    if (!(v->masses == masses)) {
      fail(ErrorCode::kInvalidArgument, "volume-mass potential masses differ from system");
    }
  }
}

Eigen::MatrixXd kinetic_cometric(const HamiltonianSpec& spec, const Eigen::VectorXd& q) {
  check_dim(spec, q);
  const MassTriple& m = spec.masses;
  switch (spec.rep) {
    case Representation::kR: return cometric_r({q[0], q[1], q[2]}, m).g;
    case Representation::kRho: return cometric_rho({q[0], q[1], q[2]}, m).g;
    case Representation::kGeo: return cometric_geo({q[0], q[1], q[2]}).g;
    case Representation::kVol: return cometric_vol(q[0], q[1]).g;
    case Representation::kVolM: return cometric_vol_mass({q[0], q[1]}, m).g;
    case Representation::kPOnly: return Eigen::MatrixXd::Constant(1, 1, 3.0 * q[0]);
    case Representation::kPmOnly:
      return Eigen::MatrixXd::Constant(1, 1, 3.0 * m.volume_scale() * q[0]);
  }
  return {};
}

std::vector<Eigen::MatrixXd> kinetic_cometric_gradient(const HamiltonianSpec& spec,
                                                       const Eigen::VectorXd& q) {
  check_dim(spec, q);
  const MassTriple& m = spec.masses;
  std::vector<Eigen::MatrixXd> out;
  auto take = [&out](const auto& arr) {
    for (const auto& x : arr) out.emplace_back(x);
  };
  switch (spec.rep) {
    case Representation::kR: take(cometric_r_gradient({q[0], q[1], q[2]}, m)); break;
    case Representation::kRho: take(cometric_rho_gradient(m)); break;
    case Representation::kGeo: take(cometric_geo_gradient({q[0], q[1], q[2]})); break;
    case Representation::kVol: take(cometric_vol_gradient(q[0], q[1])); break;
    case Representation::kVolM: take(cometric_vol_mass_gradient({q[0], q[1]}, m)); break;
    case Representation::kPOnly: out.emplace_back(Eigen::MatrixXd::Constant(1, 1, 3.0)); break;
    case Representation::kPmOnly:
      out.emplace_back(Eigen::MatrixXd::Constant(1, 1, 3.0 * m.volume_scale()));
      break;
  }
  return out;
}

Eigen::VectorXd pomega_linear_coefficients(const HamiltonianSpec& spec,
                                           const Eigen::VectorXd& q) {
  check_dim(spec, q);
  const MassTriple& m = spec.masses;
  const Eigen::Vector3d x = q.size() == 3 ? Eigen::Vector3d(q) : Eigen::Vector3d::Zero();
  if (spec.rep == Representation::kR) return linear_coeff_r<double>(x, m.m1(), m.m2(), m.m3());
  if (spec.rep == Representation::kRho) {
    return linear_coeff_rho<double>(x, m.m1(), m.m2(), m.m3());
  }
  return Eigen::VectorXd::Zero(q.size());
}

Eigen::MatrixXd pomega_linear_jacobian(const HamiltonianSpec& spec,
                                       const Eigen::VectorXd& q) {
  check_dim(spec, q);
  const MassTriple& m = spec.masses;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q.size(), q.size());
  if (spec.rep != Representation::kR && spec.rep != Representation::kRho) return J;
  const auto x = seeded(q);
  const auto b = spec.rep == Representation::kR ? linear_coeff_r<AD>(x, m.m1(), m.m2(), m.m3())
                                                : linear_coeff_rho<AD>(x, m.m1(), m.m2(), m.m3());
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) J(i, k) = derivative_or_zero(b[i], k);
  }
  return J;
}

double effective_potential(const HamiltonianSpec& spec, const Eigen::VectorXd& q) {
  check_dim(spec, q);
  const Potential& V = spec.potential;
  const double w2 = spec.p_omega * spec.p_omega;
  switch (spec.rep) {
    case Representation::kR: {
      const RhoPoint rho = rho_from_r({q[0], q[1], q[2]});
      double v = V.value(rho);
      if (w2 != 0.0) v += w2 * centrifugal(rho.rho12, rho.rho23, rho.rho31, spec.masses);
      return v;
    }
    case Representation::kRho: {
      double v = V.value({q[0], q[1], q[2]});
      if (w2 != 0.0) v += w2 * centrifugal(q[0], q[1], q[2], spec.masses);
      return v;
    }
    case Representation::kGeo: return V.value_geo({q[0], q[1], q[2]});
    case Representation::kVol:
    case Representation::kVolM: return V.value_vol(q[0], q[1]);
    case Representation::kPOnly:
    case Representation::kPmOnly: return V.value_p(q[0]);
  }
  return 0.0;
}

Eigen::VectorXd effective_potential_gradient(const HamiltonianSpec& spec,
                                             const Eigen::VectorXd& q) {
  check_dim(spec, q);
  const Potential& V = spec.potential;
  const double w2 = spec.p_omega * spec.p_omega;
  switch (spec.rep) {
    case Representation::kR: {
      const RhoPoint rho = rho_from_r({q[0], q[1], q[2]});
      const Eigen::Vector3d g = V.gradient(rho);
      Eigen::VectorXd out(3);
      for (int i = 0; i < 3; ++i) out[i] = 2.0 * q[i] * g[i];
      if (w2 != 0.0) {
        const auto x = seeded(q);
        const AD c = centrifugal<AD>(x[0] * x[0], x[1] * x[1], x[2] * x[2], spec.masses);
        for (int i = 0; i < 3; ++i) out[i] += w2 * derivative_or_zero(c, i);
      }
      return out;
    }
    case Representation::kRho: {
      Eigen::VectorXd out = V.gradient({q[0], q[1], q[2]});
      if (w2 != 0.0) {
        const auto x = seeded(q);
        const AD c = centrifugal<AD>(x[0], x[1], x[2], spec.masses);
        for (int i = 0; i < 3; ++i) out[i] += w2 * derivative_or_zero(c, i);
      }
      return out;
    }
    case Representation::kGeo: return V.gradient_geo({q[0], q[1], q[2]});
    case Representation::kVol:
    case Representation::kVolM: return V.gradient_vol(q[0], q[1]);
    case Representation::kPOnly:
    case Representation::kPmOnly:
      return Eigen::VectorXd::Constant(1, V.derivative_p(q[0]));
  }
  return {};
}

double kinetic_energy(const HamiltonianSpec& spec, const PhaseState& s) {
  if (s.rep != spec.rep) fail(ErrorCode::kRepresentationMismatch, "state/spec representation");
  const Eigen::MatrixXd G = kinetic_cometric(spec, s.q);
  double k = s.p.dot(G * s.p);
  if (spec.p_omega != 0.0) k += spec.p_omega * pomega_linear_coefficients(spec, s.q).dot(s.p);
  return k;
}

double eval_H(const HamiltonianSpec& spec, const PhaseState& s) {
  return kinetic_energy(spec, s) + effective_potential(spec, s.q);
}

double eval_H_anharmonic_energy(double A, double B, double k) {
  if (B == 0.0 || std::abs(k) == 1.0) {
    fail(ErrorCode::kDegenerateModulus, "anharmonic energy needs B != 0 and |k| != 1");
  }
  const double w = 1.0 - k * k;
  return A * A * k * k / (B * w * w);
}

double eval_H_harmonic_energy(double A, double c1) { return c1 * A; }

PomegaCyclicReport pomega_cyclic_diagnostic(Representation rep, const Eigen::Vector3d& q,
                                            const MassTriple& m) {
  if (rep != Representation::kR && rep != Representation::kRho) {
    fail(ErrorCode::kRepresentationMismatch, "p_omega terms exist only for R and Rho");
  }
  PomegaCyclicReport out;
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  if (rep == Representation::kR) {
    out.stated = linear_coeff_r<double>(q, m1, m2, m3);
    const double a = q[0] * q[0], b = q[1] * q[1], c = q[2] * q[2];
    const double k = 2.0 / 3.0 * area_from_sq(a, b, c);
    out.cyclic[0] = out.stated[0];
    out.cyclic[1] = k * (m2 * a - m3 * c) / (m2 * m3 * q[1] * c * a);
    out.cyclic[2] = k * (m3 * b - m1 * a) / (m3 * m1 * q[2] * a * b);
  } else {
    out.stated = linear_coeff_rho<double>(q, m1, m2, m3);
    const double a = q[0], b = q[1], c = q[2];
    const double k = 4.0 / 3.0 * area_from_sq(a, b, c);
    out.cyclic[0] = out.stated[0];
    out.cyclic[1] = k * (m2 * a - m3 * c) / (m2 * m3 * c * a);
    out.cyclic[2] = k * (m3 * b - m1 * a) / (m3 * m1 * a * b);
  }
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double scale = std::max(std::abs(out.stated[i]), std::abs(out.cyclic[i]));
    if (scale > 0.0) worst = std::max(worst, std::abs(out.stated[i] - out.cyclic[i]) / scale);
  }
  out.max_relative_difference = worst;
  out.consistent = worst < 1e-12;
  return out;
}

}  // namespace threebody
