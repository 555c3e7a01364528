#pragma once

#include "fbsim/separability.hpp"
#include "fbsim/steady.hpp"

namespace fbsim {

/// The two joint-quadrature second moments that close under the squeezing
/// dynamics: V_minus = <(x1-x2)^2>, V_plus = <(y1+y2)^2>.
struct MomentState {
  double v_minus = 0.0;
  double v_plus = 0.0;
};

/// dV/dt = -(gamma_minus - gamma_plus + 2 g12) V + (gamma_minus + gamma_plus)/2,
/// identical form for both moments.
std::pair<double, double> moment_rhs(const MomentState& m, const SqueezingProblem& p);

double moment_decay_coefficient(const SqueezingProblem& p);
double moment_steady_value(const SqueezingProblem& p);

struct MomentSample {
  double t = 0.0;
  MomentState state;
};

/// RK4 on the scalar ODE, cross-checked at every output time against the
/// exact exponential solution (<= 1e-10 relative); a disagreement throws.
std::vector<MomentSample> moment_evolve(const MomentState& m0, const SqueezingProblem& p,
                                        double t_final, double dt);

/// The noisy-squeezing generator: H = 2 g12 (x1 x2 - y1 y2) with dissipators
/// gamma_minus D[a_j] + gamma_plus D[a_j^dag] on each mode.
LindbladSpec noisy_squeezing_spec(const SqueezingProblem& p, int fock_dim);

struct CrossValidationReport {
  bool ok = false;
  double max_deviation = 0.0;    // max |full-space - closed-form| over time
  double tolerance = 0.0;        // max(1e-3, truncation metric)
  double truncation_metric = 0.0;
  std::vector<double> times;
  std::vector<double> v_minus_full, v_minus_closed;
  std::vector<double> v_plus_full, v_plus_closed;
  std::string message;
};

/// Evolve the full two-mode master equation from vacuum and compare the
/// Duan moments against the closed-form ODE over t in [0, 5/gamma_minus].
CrossValidationReport cross_validate(const SqueezingProblem& p, int fock_dim,
                                     double t_final = 0.0);

}  // namespace fbsim
