#include "threebody/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "threebody/errors.hpp"

namespace threebody {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, IntegrationStats& stats) : rhs_(rhs), stats_(stats) {}

  void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    ++stats_.rhs_evals;
    rhs_(t, y, dy);
  }

  void rk4(double t, double h, Eigen::VectorXd& y) {
    eval(t, y, k1_);
    eval(t + 0.5 * h, y + 0.5 * h * k1_, k2_);
    eval(t + 0.5 * h, y + 0.5 * h * k2_, k3_);
    eval(t + h, y + h * k3_, k4_);
    y += h / 6.0 * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  // One Dormand-Prince attempt; k1 must hold f(t, y). Returns the scaled error norm.
  double dopri(double t, double h, const Eigen::VectorXd& y, Eigen::VectorXd& y_new,
               const IntegratorSpec& spec) {
    eval(t + c2 * h, y + h * a21 * k1_, k2_);
    eval(t + c3 * h, y + h * (a31 * k1_ + a32 * k2_), k3_);
    eval(t + c4 * h, y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_), k4_);
    eval(t + c5 * h, y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_), k5_);
    eval(t + h, y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_), k6_);
    y_new = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    eval(t + h, y_new, k7_);
    const Eigen::VectorXd err =
        h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc =
          spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double r = err[i] / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
  }

  // Implicit midpoint: y1 = y0 + h f(t + h/2, (y0 + y1)/2), solved for the
  // midpoint with a simplified Newton iteration.
  void midpoint(double t, double h, Eigen::VectorXd& y) {
    const Eigen::Index n = y.size();
    const double tm = t + 0.5 * h;
    Eigen::VectorXd f(n), fp(n);
    eval(tm, y, f);
    Eigen::VectorXd z = y + 0.5 * h * f;  // midpoint guess

    Eigen::MatrixXd J(n, n);
    eval(tm, z, f);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dz = 1e-7 * std::max(1.0, std::abs(z[j]));
      Eigen::VectorXd zp = z;
      zp[j] += dz;
      eval(tm, zp, fp);
      J.col(j) = (fp - f) / dz;
    }
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 0.5 * h * J;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      ++stats_.newton_iterations;
      if (it > 0) eval(tm, z, f);
      const Eigen::VectorXd res = z - y - 0.5 * h * f;
      const Eigen::VectorXd dz = lu.solve(-res);
      z += dz;
      if (!finite(z)) break;
      const double scale = 1.0 + y.cwiseAbs().maxCoeff();
      if (res.cwiseAbs().maxCoeff() < 1e-13 * scale &&
          dz.cwiseAbs().maxCoeff() < 1e-13 * scale) {
        converged = true;
        break;
      }
    }
    if (!converged) fail(ErrorCode::kStepFailure, "implicit midpoint Newton did not converge");
    y = 2.0 * z - y;
  }

  Eigen::VectorXd k1_, k2_, k3_, k4_, k5_, k6_, k7_;

 private:
  const OdeRhs& rhs_;
  IntegrationStats& stats_;
};

}  // namespace

const char* to_string(IntegratorMethod m) {
  switch (m) {
    case IntegratorMethod::kRK4Fixed: return "RK4Fixed";
    case IntegratorMethod::kAdaptiveRK45: return "AdaptiveRK45";
    case IntegratorMethod::kImplicitMidpoint: return "ImplicitMidpoint";
  }
  return "unknown";
}

IntegratorMethod integrator_from_string(const std::string& s) {
  for (auto m : {IntegratorMethod::kRK4Fixed, IntegratorMethod::kAdaptiveRK45,
                 IntegratorMethod::kImplicitMidpoint}) {
    if (s == to_string(m)) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown integrator '" + s + "'");
}

void IntegratorSpec::validate() const {
  if (!(step > 0.0)) fail(ErrorCode::kInvalidArgument, "step must be positive");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "tolerances must be positive");
  }
  if (max_steps <= 0) fail(ErrorCode::kInvalidArgument, "max_steps must be positive");
}

IntegrationStats integrate_ode(const OdeRhs& rhs, Eigen::VectorXd& y, double t0, double t1,
                               const IntegratorSpec& spec, const StepObserver& observer,
                               const std::vector<double>& stop_times) {
  spec.validate();
  if (!(t1 >= t0)) fail(ErrorCode::kInvalidArgument, "t1 < t0");
  IntegrationStats stats;
  Stepper st(rhs, stats);
  const Eigen::Index n = y.size();
  for (auto* k : {&st.k1_, &st.k2_, &st.k3_, &st.k4_, &st.k5_, &st.k6_, &st.k7_}) k->resize(n);

  std::vector<double> stops;
  for (double s : stop_times) {
    if (s > t0 && s < t1) stops.push_back(s);
  }
  stops.push_back(t1);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  if (observer) observer(t0, y);
  if (t1 == t0) return stats;
  if (!finite(y)) fail(ErrorCode::kStepFailure, "non-finite initial state");

  const double span = t1 - t0;
  double t = t0;
  std::size_t next = 0;
  // A step within this distance of a stop is stretched onto it.
  const double snap = 1e-12 * std::max(span, std::abs(t1));

  if (spec.method != IntegratorMethod::kAdaptiveRK45) {
    while (next < stops.size()) {
      if (stats.accepted >= spec.max_steps) fail(ErrorCode::kStepFailure, "max_steps exceeded");
      double h = spec.step;
      bool hit = false;
      if (t + h >= stops[next] - snap) {
        h = stops[next] - t;
        hit = true;
      }
      try {
        if (spec.method == IntegratorMethod::kRK4Fixed) {
          st.rk4(t, h, y);
        } else {
          st.midpoint(t, h, y);
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kStepFailure) throw;
        fail(ErrorCode::kStepFailure, "step h = " + std::to_string(h) + " at t = " + std::to_string(t) +
                                          " left the domain (" + e.what() + ")");
      }
      if (!finite(y)) fail(ErrorCode::kStepFailure, "non-finite state");
      t = hit ? stops[next++] : t + h;
      ++stats.accepted;
      if (observer) observer(t, y);
    }
    return stats;
  }

  // PI controller (Hairer-Wanner, beta = 0.04 with order-5 exponent 0.2).
  constexpr double kSafety = 0.9, kFacMin = 0.2, kFacMax = 5.0;
  constexpr double kAlpha = 0.2 - 0.04 * 0.75, kBeta = 0.04;
  const double h_min = spec.min_step * std::max(span, 1.0);
  double h = std::min(spec.step, span);
  double err_old = 1e-4;
  bool last_rejected = false;
  Eigen::VectorXd y_new(n);
  st.eval(t, y, st.k1_);

  while (next < stops.size()) {
    if (stats.accepted + stats.rejected >= spec.max_steps) {
      fail(ErrorCode::kStepFailure, "max_steps exceeded");
    }
    bool hit = false;
    double hs = h;
    if (t + hs >= stops[next] - snap) {
      hs = stops[next] - t;
      hit = true;
    }
    // A trial step that leaves the domain of the right-hand side is rejected like a NaN.
    double err = std::numeric_limits<double>::infinity();
    std::string domain_error;
    try {
      err = st.dopri(t, hs, y, y_new, spec);
    } catch (const Error& e) {
      domain_error = e.what();
    }
    if (!std::isfinite(err) || !finite(y_new)) {
      ++stats.rejected;
      h = 0.25 * hs;
      last_rejected = true;
      if (h < h_min) {
        fail(ErrorCode::kStepFailure, "step underflow at t = " + std::to_string(t) +
                                          (domain_error.empty() ? std::string(", non-finite state")
                                                                : " (" + domain_error + ")"));
      }
      continue;
    }
    if (err <= 1.0) {
      t = hit ? stops[next++] : t + hs;
      y = y_new;
      st.k1_ = st.k7_;
      ++stats.accepted;
      if (observer) observer(t, y);
      double fac = err == 0.0 ? kFacMax
                              : kSafety * std::pow(err, -kAlpha) * std::pow(err_old, kBeta);
      fac = std::clamp(fac, kFacMin, kFacMax);
      if (last_rejected) fac = std::min(fac, 1.0);
      // A step shortened to land on a stop says little about the next one.
      if (!(hit && hs < h)) h = hs * fac;
      err_old = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      ++stats.rejected;
      const double fac = std::max(kFacMin, kSafety * std::pow(err, -0.2));
      h = hs * fac;
      last_rejected = true;
      if (h < h_min) fail(ErrorCode::kStepFailure, "minimum step size reached");
    }
  }
  return stats;
}

}  // namespace threebody
