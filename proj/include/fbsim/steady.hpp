#pragma once

#include <optional>

#include "fbsim/superop.hpp"

namespace fbsim {

struct SteadyStateOptions {
  /// Warm start for the long-time-evolution route. Defaults to the
  /// maximally mixed state.
  std::optional<DensityMatrix> guess;
  double residual_tol = 1e-10;  // ||L(rho)||_F target
  double max_time = 1e4;        // evolution-time cap before giving up
  int check_every = 25;         // steps between residual checks
  /// Largest total dim handled by the null-space (SVD) route; beyond this
  /// the long-time-evolution route is used.
  int null_space_dim_cap = 36;
};

struct SteadyStateResult {
  /// Unique steady state, trace-normalized. Empty when the null space is
  /// degenerate (see multiplicity/basis) -- a degenerate case is reported,
  /// never silently resolved.
  std::optional<DensityMatrix> rho;
  double residual_norm = 0.0;  // ||L(rho)||_F of the returned state
  int multiplicity = 1;
  std::vector<Matrix> basis;  // null-space basis when multiplicity > 1
  double truncation_metric = 0.0;
  bool used_null_space = false;
  double evolved_time = 0.0;
};

SteadyStateResult steady_state(const LindbladSpec& spec,
                               const SteadyStateOptions& opts = {});

}  // namespace fbsim
