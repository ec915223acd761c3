#include "threebody/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

HamiltonianSpec metric_only(Representation rep, const MassTriple& m) {
  HamiltonianSpec s;
  s.rep = rep;
  s.masses = m;
  return s;
}

bool p_chart(Representation rep) {
  return rep == Representation::kPOnly || rep == Representation::kPmOnly;
}

double p_chart_coefficient(const HamiltonianSpec& spec) {
  return spec.rep == Representation::kPmOnly ? spec.masses.volume_scale() : 1.0;
}

std::optional<GeoPoint> geo_of(Representation rep, const Eigen::VectorXd& q) {
  switch (rep) {
    case Representation::kR: return geo_from_rho(rho_from_r({q[0], q[1], q[2]}));
    case Representation::kRho: return geo_from_rho({q[0], q[1], q[2]});
    case Representation::kGeo: return GeoPoint{q[0], q[1], q[2]};
    default: return std::nullopt;
  }
}

Eigen::Matrix3d geo_jacobian_matrix(const RhoPoint& rho) {
  const auto J = geo_jacobian(rho);
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) out(i, k) = J[i][k];
  }
  return out;
}

double momentum_scale(const Eigen::VectorXd& p) {
  return 1.0 + (p.size() ? p.cwiseAbs().maxCoeff() : 0.0);
}

PhaseState r_to_rho(const PhaseState& s) {
  for (int i = 0; i < 3; ++i) {
    if (!(s.q[i] > 0.0)) fail(ErrorCode::kSingularJacobian, "r -> rho at r = 0");
  }
  PhaseState out{Representation::kRho, Eigen::VectorXd(3), Eigen::VectorXd(3)};
  for (int i = 0; i < 3; ++i) {
    out.q[i] = s.q[i] * s.q[i];
    out.p[i] = s.p[i] / (2.0 * s.q[i]);
  }
  return out;
}

PhaseState rho_to_r(const PhaseState& s) {
  PhaseState out{Representation::kR, Eigen::VectorXd(3), Eigen::VectorXd(3)};
  for (int i = 0; i < 3; ++i) {
    if (!(s.q[i] > 0.0)) fail(ErrorCode::kSingularJacobian, "rho -> r at rho = 0");
    out.q[i] = std::sqrt(s.q[i]);
    out.p[i] = 2.0 * out.q[i] * s.p[i];
  }
  return out;
}

PhaseState rho_to_geo(const PhaseState& s) {
  const RhoPoint rho{s.q[0], s.q[1], s.q[2]};
  const GeoPoint g = geo_from_rho(rho);
  if (classify_degeneracy(g) != DegeneracyClass::kRegular) {
    fail(ErrorCode::kSingularJacobian, "rho -> (P,S,T) at a degenerate triangle");
  }
  const Eigen::Matrix3d J = geo_jacobian_matrix(rho);
  PhaseState out{Representation::kGeo, Eigen::Vector3d(g.P, g.S, g.T), Eigen::VectorXd(3)};
  out.p = J.transpose().fullPivLu().solve(Eigen::Vector3d(s.p));
  return out;
}

PhaseState geo_to_rho(const PhaseState& s, const std::optional<RhoPoint>& labels) {
  const GeoPoint g{s.q[0], s.q[1], s.q[2]};
  const auto roots = rho_from_geo(g).sorted.as_array();
  std::array<double, 3> rho = roots;
  if (labels) {
    const auto h = labels->as_array();
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return h[a] < h[b]; });
    for (int k = 0; k < 3; ++k) rho[idx[k]] = roots[k];
  }
  const RhoPoint rp = RhoPoint::from_array(rho);
  const Eigen::Matrix3d J = geo_jacobian_matrix(rp);
  PhaseState out{Representation::kRho, Eigen::Vector3d(rho[0], rho[1], rho[2]),
                 Eigen::VectorXd(3)};
  out.p = J.transpose() * Eigen::Vector3d(s.p);
  return out;
}

}  // namespace

FlowDerivative flow_rhs(const HamiltonianSpec& spec, const PhaseState& s) {
  if (s.rep != spec.rep) fail(ErrorCode::kRepresentationMismatch, "state/spec representation");
  const Eigen::MatrixXd G = kinetic_cometric(spec, s.q);
  const auto dG = kinetic_cometric_gradient(spec, s.q);
  FlowDerivative out;
  out.q_dot = 2.0 * G * s.p;
  out.p_dot = -effective_potential_gradient(spec, s.q);
  for (std::size_t k = 0; k < dG.size(); ++k) out.p_dot[k] -= s.p.dot(dG[k] * s.p);
  if (spec.p_omega != 0.0) {
    out.q_dot += spec.p_omega * pomega_linear_coefficients(spec, s.q);
    out.p_dot -= spec.p_omega * pomega_linear_jacobian(spec, s.q).transpose() * s.p;
  }
  return out;
}

Eigen::VectorXd newton_rhs_generic(const HamiltonianSpec& spec, const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& q_dot) {
  const Eigen::MatrixXd G = kinetic_cometric(spec, q);
  Eigen::VectorXd rhs = q_dot;
  if (spec.p_omega != 0.0) rhs -= spec.p_omega * pomega_linear_coefficients(spec, q);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible()) fail(ErrorCode::kDegenerateMetric, "cometric is singular");
  PhaseState s{spec.rep, q, 0.5 * lu.solve(rhs)};
  const FlowDerivative f = flow_rhs(spec, s);
  const auto dG = kinetic_cometric_gradient(spec, q);
  Eigen::MatrixXd Gdot = Eigen::MatrixXd::Zero(G.rows(), G.cols());
  for (std::size_t k = 0; k < dG.size(); ++k) Gdot += q_dot[k] * dG[k];
  Eigen::VectorXd acc = 2.0 * (Gdot * s.p + G * f.p_dot);
  if (spec.p_omega != 0.0) acc += spec.p_omega * pomega_linear_jacobian(spec, q) * q_dot;
  return acc;
}

Eigen::Vector3d newton_rhs_geo(const GeoPoint& g, const Eigen::Vector3d& v, const Potential& V) {
  const double P = g.P, S = g.S, T = g.T;
  const double bracket = geo_bracket(g);
  const double P2 = P * P, P3 = P2 * P, P4 = P2 * P2, P5 = P4 * P;
  if (!(P > 0.0) || !(std::abs(S) > 1e-12 * P2) ||
      !(std::abs(bracket) > 1e-12 * std::pow(P, 6))) {
    fail(ErrorCode::kDegenerateMetric, "Newton form in (P,S,T) at vanishing determinant");
  }
  const double D = 3.0 * P * S * bracket;
  const double Pd = v[0], Sd = v[1], Td = v[2];
  const Eigen::Vector3d dV = V.gradient_geo(g);
  const double VP = dV[0], VS = dV[1], VT = dV[2];
  const double u = 4 * S + P2;
  const double S2 = S * S, S3 = S2 * S;

  const double ddP =
      3.0 / (2.0 * D) *
          (-4 * S * Pd * Pd * (4 * S * u * u - P * T * (12 * S + P2)) +
           3 * Sd * Sd * T * (48 * S * P + 4 * P3 - 27 * T) -
           3 * S * Td * Td * (12 * S - P2) - 12 * S * Sd * Pd * T * (24 * S - 2 * P2) +
           Td * (6 * S * Pd * (8 * S * u - 3 * P * T) -
                 12 * S * Sd * (8 * S * P + 2 * P3 - 9 * T))) -
      6 * (3 * T * VT + 2 * S * VS + P * VP);

  const double ddS =
      3.0 / (2.0 * D * P) *
          (Sd * Sd *
               (4 * P * T * (-72 * S2 + 30 * S * P2 + P4) - 16 * S * P2 * u * u +
                27 * T * T * (6 * S - P2)) +
           6 * S2 * Td * Td * (12 * S - P2) +
           8 * S2 * Pd * Pd * (4 * S * u * u - P * T * (12 * S + P2)) +
           2 * S * Sd * Pd *
               (4 * T * (72 * S2 + 30 * S * P2 + P4) - 16 * S * P * u * u - 27 * P * T * T) +
           Td * (24 * S2 * Sd * (8 * S * P + 2 * P3 - 9 * T) -
                 12 * S2 * Pd * (8 * S * u - 3 * P * T))) -
      2 * S * (4 * u * VT + P * VS + 6 * VP);

  const double ddT =
      3.0 / (2.0 * D * P) *
          (8 * S * Pd * Pd * T * (96 * S3 - 48 * S2 * P2 + 14 * S * P4 - 3 * P3 * T) +
           Sd * Sd * T *
               (16 * P2 * (96 * S2 + 12 * S * P2 + P4) - 144 * P * T * (6 * S + P2) +
                243 * T * T) +
           S * Td * Td * (-192 * S2 * P + 12 * S * (8 * P3 + 9 * T) + 4 * P5 - 45 * P2 * T) -
           8 * S * Sd * Pd * T *
               (192 * S2 * P - 12 * S * (8 * P3 + 9 * T) - 4 * P5 + 45 * P2 * T) +
           Td * (16 * S * Pd *
                     (32 * S3 * P - 4 * S2 * (4 * P3 + 9 * T) - 3 * S * P2 * (2 * P3 - 5 * T) +
                      P4 * T) -
                 4 * S * Sd *
                     (-6 * P * T * (36 * S + 13 * P2) + 8 * P2 * u * (12 * S + P2) +
                      81 * T * T))) -
      2 * (4 * T * (12 * S + P2) * VT + 4 * S * u * VS + 9 * T * VP);

  return {ddP, ddS, ddT};
}

Eigen::Vector2d newton_rhs_vol(double P, double S, const Eigen::Vector2d& v, const Potential& V) {
  const double D = det_vol_factorized(P, S);
  if (!(std::abs(D) > 1e-12 * std::abs(P * P * S)) || S == 0.0) {
    fail(ErrorCode::kDegenerateMetric, "Newton form in (P,S) at vanishing determinant");
  }
  const double Pd = v[0], Sd = v[1];
  const Eigen::Vector2d dV = V.gradient_vol(P, S);
  const double ddP = (3 * P * S * Pd * Pd - 36 * S * Pd * Sd + 9 * P * Sd * Sd) / (2 * D) -
                     6 * (2 * S * dV[1] + P * dV[0]);
  const double ddS =
      (3 * Sd * Sd * (P * P - 18 * S) - 6 * S * S * Pd * Pd + 6 * P * S * Pd * Sd) / (2 * D) -
      2 * S * (P * dV[1] + 6 * dV[0]);
  return {ddP, ddS};
}

PhaseState momentum_transform(Representation to, const PhaseState& s, const MassTriple& m,
                              const std::optional<RhoPoint>& rho_labels) {
  if (s.q.size() != dimension(s.rep) || s.p.size() != dimension(s.rep)) {
    fail(ErrorCode::kRepresentationMismatch, "state dimension does not match representation");
  }
  if (to == s.rep) return s;
  const Representation from = s.rep;
  const bool needs_unit = to == Representation::kGeo || to == Representation::kVol ||
                          to == Representation::kPOnly || from == Representation::kGeo;
  if (needs_unit && !m.is_unit()) {
    fail(ErrorCode::kRepresentationMismatch, "geometric charts require unit masses");
  }
  using R = Representation;
  if (from == R::kR && to == R::kRho) return r_to_rho(s);
  if (from == R::kRho && to == R::kR) return rho_to_r(s);
  if (from == R::kRho && to == R::kGeo) return rho_to_geo(s);
  if (from == R::kGeo && to == R::kRho) return geo_to_rho(s, rho_labels);
  if (from == R::kR && to == R::kGeo) return rho_to_geo(r_to_rho(s));
  if (from == R::kGeo && to == R::kR) {
    std::optional<RhoPoint> hint;
    if (rho_labels) hint = *rho_labels;
    return rho_to_r(geo_to_rho(s, hint));
  }
  if (from == R::kGeo && to == R::kVol) {
    if (std::abs(s.p[2]) > 1e-12 * momentum_scale(s.p)) {
      fail(ErrorCode::kRepresentationMismatch, "(P,S,T) state is off the P_T = 0 manifold");
    }
    return {R::kVol, s.q.head<2>(), s.p.head<2>()};
  }
  if (from == R::kVol && to == R::kPOnly) {
    if (std::abs(s.p[1]) > 1e-12 * momentum_scale(s.p)) {
      fail(ErrorCode::kRepresentationMismatch, "volume state is off the P_S = 0 manifold");
    }
    return {R::kPOnly, s.q.head<1>(), s.p.head<1>()};
  }
  if (from == R::kVolM && to == R::kPmOnly) {
    if (std::abs(s.p[1]) > 1e-12 * momentum_scale(s.p)) {
      fail(ErrorCode::kRepresentationMismatch, "volume state is off the P_S = 0 manifold");
    }
    return {R::kPmOnly, s.q.head<1>(), s.p.head<1>()};
  }
  fail(ErrorCode::kRepresentationMismatch, std::string("no point transformation from ") +
                                               to_string(from) + " to " + to_string(to));
}

Eigen::VectorXd momenta_from_velocities(Representation rep, const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& q_dot, const MassTriple& m) {
  const Eigen::MatrixXd G = kinetic_cometric(metric_only(rep, m), q);
  const double det = G.determinant();
  const double scale = std::pow(G.cwiseAbs().maxCoeff(), static_cast<double>(G.rows()));
  if (!(std::abs(det) > 1e-14 * scale)) {
    fail(ErrorCode::kDegenerateMetric, "cannot invert a singular cometric");
  }
  return 0.5 * G.fullPivLu().solve(q_dot);
}

namespace {

// p_a for labels (a, b, c) = (12, 23, 31) and cyclic shifts.
double p12g_component(double ra, double rb, double rc, double va, double vb, double vc,
                      double mua, double mub, double muc, double I, double S) {
  const double a = ra * ra, b = rb * rb, c = rc * rc;
  const double t1 = 4 * a * ((mua * mub + mua * muc + mub * muc) * b * c + 4 * mua * mua * S);
  const double t2 = ra * rb * (2 * (mua + mub) * muc * (a + b - c) * c +
                               mua * mub * ((a - b) * (a - b) - c * c));
  const double t3 = ra * rc * (2 * (mua + muc) * mub * (a - b + c) * b +
                               mua * muc * ((a - c) * (a - c) - b * b));
  return (t1 * va - t2 * vb - t3 * vc) / (16 * I * S);
}

}  // namespace

Eigen::Vector3d p12g_stated(const SideLengths& r, const Eigen::Vector3d& rd,
                             const MassTriple& m) {
  const RhoPoint rho = rho_from_r(r);
  const double I = moment_of_inertia(rho, m);
  const double S = area_sq(rho);
  if (!(S > 0.0)) fail(ErrorCode::kDegenerateMetric, "stated momentum formula at S = 0");
  const double u12 = m.mu12(), u23 = m.mu23(), u31 = m.mu31();
  return {p12g_component(r.r12, r.r23, r.r31, rd[0], rd[1], rd[2], u12, u23, u31, I, S),
          p12g_component(r.r23, r.r31, r.r12, rd[1], rd[2], rd[0], u23, u31, u12, I, S),
          p12g_component(r.r31, r.r12, r.r23, rd[2], rd[0], rd[1], u31, u12, u23, I, S)};
}

double pt_from_velocities_stated(const GeoPoint& g, const Eigen::Vector3d& v) {
  const double P = g.P, S = g.S, T = g.T;
  const double D = det_geo_factorized(g);
  if (D == 0.0) fail(ErrorCode::kDegenerateMetric, "D_geo = 0");
  const double u = P * P + 4 * S;
  return 3 * S / (2 * D) *
         (v[0] * (8 * S * u - 3 * P * T) + v[1] * (18 * T - 4 * P * u) +
          v[2] * (P * P - 12 * S));
}

double ps_from_velocities_stated(double P, double S, const Eigen::Vector2d& v) {
  const double den = 2 * S * (12 * S - P * P);
  if (den == 0.0) fail(ErrorCode::kDegenerateMetric, "D_vol = 0");
  return (2 * v[0] * S - P * v[1]) / den;
}

double Trajectory::max_relative_energy_drift() const {
  if (energy.empty()) return 0.0;
  const double e0 = energy.front();
  const double scale = std::max(std::abs(e0), std::numeric_limits<double>::min());
  double worst = 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - e0) / scale);
  return worst;
}

std::size_t Trajectory::index_of(double t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) {
    fail(ErrorCode::kInvalidArgument, "time not present in trajectory");
  }
  return static_cast<std::size_t>(it - times.begin());
}

Trajectory integrate(const HamiltonianSpec& spec, const PhaseState& s0, double t0, double t1,
                     const IntegratorSpec& integ, const TrajectoryOptions& opt) {
  spec.validate();
  if (s0.rep != spec.rep || s0.q.size() != dimension(spec.rep) ||
      s0.p.size() != dimension(spec.rep)) {
    fail(ErrorCode::kRepresentationMismatch, "initial state does not match the Hamiltonian");
  }
  for (const auto& name : opt.monitors) {
    const bool ok = (name == "P_T" && spec.rep == Representation::kGeo) ||
                    (name == "P_S" && (spec.rep == Representation::kGeo ||
                                       spec.rep == Representation::kVol ||
                                       spec.rep == Representation::kVolM)) ||
                    (name == "degeneracy" && geo_of(spec.rep, s0.q).has_value());
    if (!ok) {
      fail(ErrorCode::kInvalidArgument,
           "monitor '" + name + "' is not available in " + to_string(spec.rep));
    }
  }

  const int n = dimension(spec.rep);
  const bool chart = p_chart(spec.rep);
  const double c = chart ? p_chart_coefficient(spec) : 1.0;

  Eigen::VectorXd y(2 * n);
  if (chart) {
    if (!(s0.q[0] > 0.0)) fail(ErrorCode::kInvalidArgument, "P-only flow needs P(0) > 0");
    const double x = std::sqrt(s0.q[0]);
    y << x, 2.0 * x * s0.p[0];
  } else {
    y << s0.q, s0.p;
  }

  OdeRhs rhs;
  if (chart) {
    rhs = [&spec, c](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
      dy.resize(2);
      dy[0] = 1.5 * c * yy[1];
      dy[1] = -2.0 * yy[0] * spec.potential.derivative_p(yy[0] * yy[0]);
    };
  } else {
    rhs = [&spec, n](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
      const PhaseState s{spec.rep, yy.head(n), yy.tail(n)};
      const FlowDerivative f = flow_rhs(spec, s);
      dy.resize(2 * n);
      dy << f.q_dot, f.p_dot;
    };
  }

  Trajectory traj;
  traj.rep = spec.rep;
  for (const auto& name : opt.monitors) {
    if (name != "degeneracy") traj.monitors[name] = {};
  }
  const bool want_degeneracy = geo_of(spec.rep, s0.q).has_value();
  const std::set<double> outputs(opt.output_times.begin(), opt.output_times.end());

  auto record = [&](double t, const Eigen::VectorXd& yy) {
    if (!opt.record_steps && t != t0 && !outputs.count(t)) return;
    Eigen::VectorXd q(n), p(n);
    double e;
    if (chart) {
      const double x = yy[0], px = yy[1];
      q[0] = x * x;
      p[0] = px / (2.0 * x);
      e = 0.75 * c * px * px + spec.potential.value_p(q[0]);
    } else {
      q = yy.head(n);
      p = yy.tail(n);
      e = eval_H(spec, {spec.rep, q, p});
    }
    traj.times.push_back(t);
    traj.energy.push_back(e);
    for (auto& [name, series] : traj.monitors) {
      series.push_back(name == "P_T" ? p[2] : p[1]);
    }
    if (want_degeneracy) traj.degeneracy.push_back(classify_degeneracy(*geo_of(spec.rep, q)));
    traj.q.push_back(std::move(q));
    traj.p.push_back(std::move(p));
  };

  traj.stats = integrate_ode(rhs, y, t0, t1, integ, record, opt.output_times);
  return traj;
}

NewtonTrajectory integrate_newton_geo(const GeoPoint& g0, const Eigen::Vector3d& v0,
                                      const Potential& V, double t0, double t1,
                                      const IntegratorSpec& integ,
                                      const std::vector<double>& output_times) {
  Eigen::VectorXd y(6);
  y << g0.P, g0.S, g0.T, v0;
  const OdeRhs rhs = [&V](double, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
    dy.resize(6);
    const Eigen::Vector3d a =
        newton_rhs_geo({yy[0], yy[1], yy[2]}, Eigen::Vector3d(yy.tail<3>()), V);
    dy << yy.tail<3>(), a;
  };
  NewtonTrajectory out;
  const std::set<double> outputs(output_times.begin(), output_times.end());
  auto record = [&](double t, const Eigen::VectorXd& yy) {
    if (t != t0 && !outputs.count(t)) return;
    out.times.push_back(t);
    out.q.emplace_back(yy.head<3>());
    out.v.emplace_back(yy.tail<3>());
  };
  integrate_ode(rhs, y, t0, t1, integ, record, output_times);
  return out;
}

double invariant_manifold_monitor(const Trajectory& traj, const std::string& name) {
  const auto it = traj.monitors.find(name);
  if (it == traj.monitors.end()) {
    fail(ErrorCode::kInvalidArgument, "trajectory has no monitor '" + name + "'");
  }
  double worst = 0.0;
  for (double v : it->second) worst = std::max(worst, std::abs(v));
  return worst;
}

RepresentationConsistency consistency_check_representations(const HamiltonianSpec& rho_spec,
                                                            const PhaseState& rho_state) {
  if (rho_spec.rep != Representation::kRho || rho_state.rep != Representation::kRho) {
    fail(ErrorCode::kRepresentationMismatch, "consistency check starts from a Rho state");
  }
  RepresentationConsistency out;
  out.H_rho = eval_H(rho_spec, rho_state);

  HamiltonianSpec r_spec = rho_spec;
  r_spec.rep = Representation::kR;
  out.H_r = eval_H(r_spec, momentum_transform(Representation::kR, rho_state, rho_spec.masses));

  const double scale = std::max(std::abs(out.H_rho), 1e-300);
  out.max_relative_difference = std::abs(out.H_r - out.H_rho) / scale;

  if (rho_spec.masses.is_unit() && rho_spec.p_omega == 0.0 && rho_spec.potential.is_symmetric()) {
    try {
      const PhaseState g =
          momentum_transform(Representation::kGeo, rho_state, rho_spec.masses);
      HamiltonianSpec g_spec = rho_spec;
      g_spec.rep = Representation::kGeo;
      out.H_geo = eval_H(g_spec, g);
      out.max_relative_difference =
          std::max(out.max_relative_difference, std::abs(*out.H_geo - out.H_rho) / scale);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularJacobian) throw;
      out.geo_rejected = true;
    }
  }
  out.consistent = out.max_relative_difference < 1e-12;
  return out;
}

}  // namespace threebody
