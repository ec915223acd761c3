#include "threebody/potentials.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cmath>
#include <limits>
#include <numbers>

#include "quad.hpp"
#include "threebody/errors.hpp"
#include "threebody/metrics.hpp"

namespace threebody {

using detail::d;
using detail::q;
using detail::quad;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kSqrt3 = std::numbers::sqrt3;

void require_positive(const RhoPoint& rho, const char* what) {
  if (!(rho.rho12 > 0.0) || !(rho.rho23 > 0.0) || !(rho.rho31 > 0.0)) {
    fail(ErrorCode::kCollisionSingularity, what);
  }
}

bool nearly_equal(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y));
}

bool equal_springs(const HarmonicChain& h) {
  return h.nu12 == h.nu13 && h.nu13 == h.nu23;
}

Eigen::Vector3d chain_geo_to_rho(const RhoPoint& rho, const Eigen::Vector3d& dgeo) {
  const auto J = geo_jacobian(rho);
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) {
    out[k] = J[0][k] * dgeo[0] + J[1][k] * dgeo[1] + J[2][k] * dgeo[2];
  }
  return out;
}

[[noreturn]] void mismatch(const char* chart) {
  fail(ErrorCode::kRepresentationMismatch,
       std::string("potential is not expressible in the ") + chart + " chart");
}

}  // namespace

const char* to_string(PotentialDependence dep) {
  switch (dep) {
    case PotentialDependence::kRhoGeneral: return "rho";
    case PotentialDependence::kPST: return "PST";
    case PotentialDependence::kPS: return "PS";
    case PotentialDependence::kPOnly: return "P";
    case PotentialDependence::kPmSm: return "PmSm";
    case PotentialDependence::kPmOnly: return "Pm";
  }
  return "unknown";
}

Potential::Potential(PotentialSpec spec) : spec_(std::move(spec)) {
  std::visit(overloaded{
                 [](const NewtonGravity& g) {
                   if (!(g.gamma > 0.0)) fail(ErrorCode::kInvalidArgument, "gamma <= 0");
                 },
                 [](const HarmonicChain& h) {
                   if (!(h.omega > 0.0) || h.nu12 < 0 || h.nu13 < 0 || h.nu23 < 0) {
                     fail(ErrorCode::kInvalidArgument, "harmonic chain parameters");
                   }
                 },
                 [](const ScaleFamily& f) {
                   if (!f.U || !f.dU) fail(ErrorCode::kInvalidArgument, "empty U");
                 },
                 [](const VolumeMass& v) {
                   if (!v.inner) fail(ErrorCode::kInvalidArgument, "empty inner potential");
                   const auto dep = v.inner->dependence();
                   if (dep != PotentialDependence::kPS && dep != PotentialDependence::kPOnly) {
                     fail(ErrorCode::kInvalidArgument, "inner potential must depend on (P,S)");
                   }
                 },
                 [](const auto&) {},
             },
             spec_);
}

PotentialDependence Potential::dependence() const {
  return std::visit(
      overloaded{
          [](const NewtonGravity&) { return PotentialDependence::kRhoGeneral; },
          [](const LogGravity2D&) { return PotentialDependence::kPST; },
          [](const HarmonicChain& h) {
            return equal_springs(h) ? PotentialDependence::kPOnly
                                    : PotentialDependence::kRhoGeneral;
          },
          [](const Lemniscate&) { return PotentialDependence::kPST; },
          [](const AnharmonicPS& a) {
            return a.C == 0.0 ? PotentialDependence::kPOnly : PotentialDependence::kPS;
          },
          [](const ScaleFamily&) { return PotentialDependence::kPS; },
          [](const VolumeMass& v) {
            return v.inner->dependence() == PotentialDependence::kPOnly
                       ? PotentialDependence::kPmOnly
                       : PotentialDependence::kPmSm;
          },
      },
      spec_);
}

bool Potential::is_symmetric() const {
  return std::visit(overloaded{
                        [](const HarmonicChain& h) { return equal_springs(h); },
                        [](const VolumeMass& v) { return v.masses.is_unit(); },
                        [](const auto&) { return true; },
                    },
                    spec_);
}

double Potential::value(const RhoPoint& rho) const {
  return std::visit(
      overloaded{
          [&](const NewtonGravity& g) {
            require_positive(rho, "gravity at a collision");
            return -g.gamma * (1.0 / std::sqrt(rho.rho12) + 1.0 / std::sqrt(rho.rho23) +
                               1.0 / std::sqrt(rho.rho31));
          },
          [&](const HarmonicChain& h) {
            return 2.0 * h.omega * h.omega *
                   (h.nu12 * rho.rho12 + h.nu13 * rho.rho31 + h.nu23 * rho.rho23);
          },
          [&](const VolumeMass& v) {
            const auto mv = modified_volume(rho, v.masses);
            return v.masses.volume_scale() * v.inner->value_vol(mv.Pm, mv.Sm);
          },
          [&](const auto&) {
            if (dependence() == PotentialDependence::kPST) {
              require_positive(rho, "logarithmic potential at a collision");
            }
            return value_geo(geo_from_rho(rho));
          },
      },
      spec_);
}

Eigen::Vector3d Potential::gradient(const RhoPoint& rho) const {
  return std::visit(
      overloaded{
          [&](const NewtonGravity& g) -> Eigen::Vector3d {
            require_positive(rho, "gravity at a collision");
            const double h = 0.5 * g.gamma;
            return {h * std::pow(rho.rho12, -1.5), h * std::pow(rho.rho23, -1.5),
                    h * std::pow(rho.rho31, -1.5)};
          },
          [&](const LogGravity2D& g) -> Eigen::Vector3d {
            require_positive(rho, "logarithmic potential at a collision");
            const double h = 0.5 * g.gamma;
            return {h / rho.rho12, h / rho.rho23, h / rho.rho31};
          },
          [&](const HarmonicChain& h) -> Eigen::Vector3d {
            const double w = 2.0 * h.omega * h.omega;
            return {w * h.nu12, w * h.nu23, w * h.nu13};
          },
          [&](const Lemniscate&) -> Eigen::Vector3d {
            require_positive(rho, "logarithmic potential at a collision");
            const double p = -kSqrt3 / 24.0;
            return {p + 0.25 / rho.rho12, p + 0.25 / rho.rho23, p + 0.25 / rho.rho31};
          },
          [&](const VolumeMass& v) -> Eigen::Vector3d {
            const MassTriple& m = v.masses;
            const auto mv = modified_volume(rho, m);
            const Eigen::Vector2d dv = v.inner->gradient_vol(mv.Pm, mv.Sm);
            const Eigen::Vector3d dPm(0.5 / m.m3(), 0.5 / m.m1(), 0.5 / m.m2());
            const auto J = geo_jacobian(rho);
            const double sm = m.is_unit() ? 1.0 : 3.0 * m.product() / m.total();
            const Eigen::Vector3d dSm(sm * J[1][0], sm * J[1][1], sm * J[1][2]);
            return m.volume_scale() * (dv[0] * dPm + dv[1] * dSm);
          },
          [&](const auto&) -> Eigen::Vector3d {
            return chain_geo_to_rho(rho, gradient_geo(geo_from_rho(rho)));
          },
      },
      spec_);
}

double Potential::value_geo(const GeoPoint& g) const {
  return std::visit(
      overloaded{
          [&](const NewtonGravity&) { return value(rho_from_geo(g).sorted); },
          [&](const LogGravity2D& lg) {
            if (!(g.T > 0.0)) fail(ErrorCode::kCollisionSingularity, "ln T at T <= 0");
            return 0.5 * lg.gamma * std::log(g.T);
          },
          [&](const HarmonicChain& h) {
            if (!equal_springs(h)) mismatch("geometric");
            return 4.0 * h.omega * h.omega * h.nu12 * g.P;
          },
          [&](const Lemniscate&) {
            if (!(g.T > 0.0)) fail(ErrorCode::kCollisionSingularity, "ln T at T <= 0");
            return 0.25 * std::log(g.T) - kSqrt3 / 12.0 * g.P;
          },
          [&](const AnharmonicPS& a) { return a.A * g.P + a.B * g.P * g.P + a.C * g.S; },
          [&](const ScaleFamily&) { return value_vol(g.P, g.S); },
          [&](const VolumeMass& v) {
            if (!v.masses.is_unit()) mismatch("geometric");
            return value_vol(g.P, g.S);
          },
      },
      spec_);
}

Eigen::Vector3d Potential::gradient_geo(const GeoPoint& g) const {
  return std::visit(
      overloaded{
          [&](const NewtonGravity&) -> Eigen::Vector3d {
            if (classify_degeneracy(g) != DegeneracyClass::kRegular) {
              fail(ErrorCode::kSingularJacobian,
                   "gravity gradient in (P,S,T) needs a regular triangle");
            }
            const RhoPoint rho = rho_from_geo(g).sorted;
            const auto J = geo_jacobian(rho);
            Eigen::Matrix3d Jm;
            for (int i = 0; i < 3; ++i) {
              for (int k = 0; k < 3; ++k) Jm(i, k) = J[i][k];
            }
            return Jm.transpose().partialPivLu().solve(gradient(rho));
          },
          [&](const LogGravity2D& lg) -> Eigen::Vector3d {
            if (!(g.T > 0.0)) fail(ErrorCode::kCollisionSingularity, "ln T at T <= 0");
            return {0.0, 0.0, 0.5 * lg.gamma / g.T};
          },
          [&](const HarmonicChain& h) -> Eigen::Vector3d {
            if (!equal_springs(h)) mismatch("geometric");
            return {4.0 * h.omega * h.omega * h.nu12, 0.0, 0.0};
          },
          [&](const Lemniscate&) -> Eigen::Vector3d {
            if (!(g.T > 0.0)) fail(ErrorCode::kCollisionSingularity, "ln T at T <= 0");
            return {-kSqrt3 / 12.0, 0.0, 0.25 / g.T};
          },
          [&](const AnharmonicPS& a) -> Eigen::Vector3d {
            return {a.A + 2.0 * a.B * g.P, a.C, 0.0};
          },
          [&](const auto&) -> Eigen::Vector3d {
            if (const auto* v = std::get_if<VolumeMass>(&spec_); v && !v->masses.is_unit()) {
              mismatch("geometric");
            }
            const Eigen::Vector2d dv = gradient_vol(g.P, g.S);
            return {dv[0], dv[1], 0.0};
          },
      },
      spec_);
}

double Potential::value_vol(double P, double S) const {
  return std::visit(
      overloaded{
          [&](const HarmonicChain& h) {
            if (!equal_springs(h)) mismatch("volume");
            return 4.0 * h.omega * h.omega * h.nu12 * P;
          },
          [&](const AnharmonicPS& a) { return a.A * P + a.B * P * P + a.C * S; },
          [&](const ScaleFamily& f) {
            const double rs = std::sqrt(S);
            return f.U(P / rs) / rs;
          },
          [&](const VolumeMass& v) {
            return v.masses.volume_scale() * v.inner->value_vol(P, S);
          },
          [&](const auto&) -> double { mismatch("volume"); },
      },
      spec_);
}

Eigen::Vector2d Potential::gradient_vol(double P, double S) const {
  return std::visit(
      overloaded{
          [&](const HarmonicChain& h) -> Eigen::Vector2d {
            if (!equal_springs(h)) mismatch("volume");
            return {4.0 * h.omega * h.omega * h.nu12, 0.0};
          },
          [&](const AnharmonicPS& a) -> Eigen::Vector2d {
            return {a.A + 2.0 * a.B * P, a.C};
          },
          [&](const ScaleFamily& f) -> Eigen::Vector2d {
            const double rs = std::sqrt(S);
            const double z = P / rs;
            const double u = f.U(z), du = f.dU(z);
            return {du / S, -0.5 * P * du / (S * S) - 0.5 * u / (S * rs)};
          },
          [&](const VolumeMass& v) -> Eigen::Vector2d {
            return v.masses.volume_scale() * v.inner->gradient_vol(P, S);
          },
          [&](const auto&) -> Eigen::Vector2d { mismatch("volume"); },
      },
      spec_);
}

double Potential::value_p(double P) const {
  const auto dep = dependence();
  if (dep != PotentialDependence::kPOnly && dep != PotentialDependence::kPmOnly) {
    mismatch("P-only");
  }
  return value_vol(P, 0.0);
}

double Potential::derivative_p(double P) const {
  const auto dep = dependence();
  if (dep != PotentialDependence::kPOnly && dep != PotentialDependence::kPmOnly) {
    mismatch("P-only");
  }
  return gradient_vol(P, 0.0)[0];
}

Potential make_volume_mass(const Potential& inner, const MassTriple& m) {
  return Potential(VolumeMass{std::make_shared<const Potential>(inner), m});
}

ScaleFamily make_power_scale_family(double coeff, double exponent) {
  ScaleFamily f;
  f.U = [coeff, exponent](double z) { return coeff * std::pow(z, exponent); };
  f.dU = [coeff, exponent](double z) {
    return exponent == 0.0 ? 0.0 : coeff * exponent * std::pow(z, exponent - 1.0);
  };
  f.label = "power";
  return f;
}

double scale_family_check(const ScaleFamily& f, double P, double S) {
  const Potential pot{f};
  const Eigen::Vector2d g = pot.gradient_vol(P, S);
  return 2.0 * S * g[1] + P * g[0] + pot.value_vol(P, S);
}

double newton_quartic_residual(const GeoPoint& g, double gamma, double V) {
  const double u = 4.0 * g.S + g.P * g.P;
  const double g2 = gamma * gamma;
  const double t32 = g.T * std::sqrt(g.T);
  return g.T * g.T * V * V * V * V - 2.0 * g2 * u * g.T * V * V +
         8.0 * g2 * gamma * t32 * V + g2 * g2 * (u * u - 8.0 * g.T * g.P);
}

double quartic_discriminant(double a, double b, double c, double dd, double e) {
  const quad A = q(a), B = q(b), C = q(c), D = q(dd), E = q(e);
  const quad r = 256 * A * A * A * E * E * E - 192 * A * A * B * D * E * E -
                 128 * A * A * C * C * E * E + 144 * A * A * C * D * D * E -
                 27 * A * A * D * D * D * D + 144 * A * B * B * C * E * E -
                 6 * A * B * B * D * D * E - 80 * A * B * C * C * D * E +
                 18 * A * B * C * D * D * D + 16 * A * C * C * C * C * E -
                 4 * A * C * C * C * D * D - 27 * B * B * B * B * E * E +
                 18 * B * B * B * C * D * E - 4 * B * B * B * D * D * D -
                 4 * B * B * C * C * C * E + B * B * C * C * D * D;
  return d(r);
}

QuarticRoots newton_quartic_roots(const GeoPoint& g, double gamma) {
  if (!(g.T > 0.0)) fail(ErrorCode::kDegenerateQuartic, "quartic needs T > 0");
  QuarticRoots out;
  const double u = 4.0 * g.S + g.P * g.P;
  const double g2 = gamma * gamma;
  const double t32 = g.T * std::sqrt(g.T);
  const double e = d(q(g2 * g2) * (q(u) * q(u) - 8 * q(g.T) * q(g.P)));
  out.coefficients = {g.T * g.T, 0.0, -2.0 * g2 * u * g.T, 8.0 * g2 * gamma * t32, e};
  const auto& c = out.coefficients;

  Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
  for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) comp(i, 3) = -c[4 - i] / c[0];
  Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
  const auto ev = es.eigenvalues();

  using cl = std::complex<long double>;
  auto poly = [&](cl z) {
    cl r = c[0];
    for (int k = 1; k < 5; ++k) r = r * z + static_cast<long double>(c[k]);
    return r;
  };
  auto dpoly = [&](cl z) {
    cl r = 4.0L * static_cast<long double>(c[0]);
    for (int k = 1; k < 4; ++k) r = r * z + static_cast<long double>((4 - k) * c[k]);
    return r;
  };
  for (int i = 0; i < 4; ++i) {
    cl z(ev[i].real(), ev[i].imag());
    cl fz = poly(z);
    for (int it = 0; it < 6; ++it) {
      const cl dz = dpoly(z);
      if (std::abs(dz) == 0.0L) break;
      const cl zn = z - fz / dz;
      const cl fn = poly(zn);
      if (std::abs(fn) >= std::abs(fz)) break;
      z = zn;
      fz = fn;
    }
    out.roots[i] = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  // A k-fold root is a simple root of the (k-1)-th derivative; eigenvalues of a
  // cluster only resolve it to eps^(1/k).
  {
    double scale = 0.0;
    for (const auto& r : out.roots) scale = std::max(scale, std::abs(r));
    const double tol = 1e-4 * std::max(scale, 1e-300);
    std::size_t i = 0;
    while (i < 4) {
      std::size_t j = i + 1;
      while (j < 4 && std::abs(out.roots[j] - out.roots[i]) < tol) ++j;
      const std::size_t k = j - i;
      if (k > 1) {
        std::array<long double, 5> dc{};
        for (int m = 0; m < 5; ++m) dc[m] = c[m];
        int deg = 4;
        for (std::size_t dd = 0; dd + 1 < k; ++dd) {
          for (int m = 0; m < deg; ++m) dc[m] *= (deg - m);
          --deg;
        }
        auto f = [&](cl z) {
          cl r = dc[0];
          for (int m = 1; m <= deg; ++m) r = r * z + dc[m];
          return r;
        };
        auto df = [&](cl z) {
          cl r = dc[0] * static_cast<long double>(deg);
          for (int m = 1; m < deg; ++m) r = r * z + dc[m] * static_cast<long double>(deg - m);
          return r;
        };
        cl z(0.0L, 0.0L);
        for (std::size_t m = i; m < j; ++m) z += cl(out.roots[m].real(), out.roots[m].imag());
        z /= static_cast<long double>(k);
        cl fz = f(z);
        for (int it = 0; it < 20 && std::abs(fz) > 0.0L; ++it) {
          const cl dz = df(z);
          if (std::abs(dz) == 0.0L) break;
          const cl zn = z - fz / dz;
          const cl fn = f(zn);
          if (std::abs(fn) >= std::abs(fz)) break;
          z = zn;
          fz = fn;
        }
        // Close but distinct roots: the derivative's root leaves a larger residual.
        long double worst = 0.0L;
        for (std::size_t m = i; m < j; ++m)
          worst = std::max(worst, std::abs(poly(cl(out.roots[m].real(), out.roots[m].imag()))));
        if (std::abs(poly(z)) <= worst) {
          for (std::size_t m = i; m < j; ++m)
            out.roots[m] = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
        }
      }
      i = j;
    }
  }

  out.discriminant_closed_form =
      d(4096 * q(std::pow(gamma, 12)) * q(std::pow(g.T, 8)) * q(geo_bracket(g)));
  out.discriminant_from_coefficients = quartic_discriminant(c[0], c[1], c[2], c[3], c[4]);

  out.labels.fill(CoulombLabel::kUnmatched);
  try {
    const RhoPoint rho = rho_from_geo(g).sorted;
    if (rho.rho12 > 0.0 && rho.rho23 > 0.0 && rho.rho31 > 0.0) {
      out.has_preimage = true;
      const double a = gamma / std::sqrt(rho.rho12);
      const double b = gamma / std::sqrt(rho.rho23);
      const double cc = gamma / std::sqrt(rho.rho31);
      const std::array<double, 4> cand = {-(a + b + cc), -a + b + cc, a - b + cc,
                                          a + b - cc};
      const std::array<CoulombLabel, 4> tags = {CoulombLabel::kNewton, CoulombLabel::kFirst,
                                                CoulombLabel::kSecond, CoulombLabel::kThird};
      std::array<int, 4> perm = {0, 1, 2, 3};
      std::array<int, 4> best = perm;
      double best_err = std::numeric_limits<double>::infinity();
      do {
        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
          err = std::max(err, std::abs(out.roots[i] - std::complex<double>(cand[perm[i]], 0.0)));
        }
        if (err < best_err) {
          best_err = err;
          best = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (int i = 0; i < 4; ++i) out.labels[i] = tags[best[i]];
      out.max_label_error = best_err / (a + b + cc);
    }
  } catch (const Error&) {
    out.has_preimage = false;
  }
  return out;
}

const char* to_string(SuperintegrabilityClass c) {
  switch (c) {
    case SuperintegrabilityClass::kMaximal: return "Maximal";
    case SuperintegrabilityClass::kMinimal: return "Minimal";
    case SuperintegrabilityClass::kGeneric: return "Generic";
  }
  return "Unknown";
}

SuperintegrabilityClass superintegrability_class(const MassTriple& m, double nu12,
                                                 double nu13, double nu23) {
  if (nu12 < 0 || nu13 < 0 || nu23 < 0) {
    fail(ErrorCode::kInvalidArgument, "spring constants must be nonnegative");
  }
  constexpr double kRel = 1e-12;
  const int holds = int(nearly_equal(m.m2() * nu13, m.m3() * nu12, kRel)) +
                    int(nearly_equal(m.m1() * nu23, m.m2() * nu13, kRel)) +
                    int(nearly_equal(m.m3() * nu12, m.m1() * nu23, kRel));
  if (holds >= 2) return SuperintegrabilityClass::kMaximal;
  if (holds == 1) return SuperintegrabilityClass::kMinimal;
  return SuperintegrabilityClass::kGeneric;
}

}  // namespace threebody
