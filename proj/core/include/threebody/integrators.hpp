#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace threebody {

enum class IntegratorMethod { kRK4Fixed, kAdaptiveRK45, kImplicitMidpoint };

const char* to_string(IntegratorMethod m);
IntegratorMethod integrator_from_string(const std::string& s);

struct IntegratorSpec {
  IntegratorMethod method = IntegratorMethod::kAdaptiveRK45;
  double step = 1e-2;  // fixed step, or initial step for the adaptive method
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_steps = 5'000'000;
  double min_step = 1e-14;  // relative to the span for the adaptive method

  void validate() const;
  friend bool operator==(const IntegratorSpec&, const IntegratorSpec&) = default;
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;
// Called at t0 and after every accepted step.
using StepObserver = std::function<void(double t, const Eigen::VectorXd& y)>;

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  long newton_iterations = 0;
};

// Integrates from t0 to t1. Steps are shortened so that every entry of
// stop_times inside (t0, t1] is hit exactly. Throws StepFailure.
IntegrationStats integrate_ode(const OdeRhs& rhs, Eigen::VectorXd& y, double t0, double t1,
                               const IntegratorSpec& spec, const StepObserver& observer,
                               const std::vector<double>& stop_times = {});

}  // namespace threebody
