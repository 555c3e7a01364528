#pragma once

#include "fbsim/feedback.hpp"

namespace fbsim {

struct QuadratureOptions {
  int min_nodes = 40;
  int max_nodes = 640;
  double tol = 1e-10;  // node-doubling stability target (Frobenius)
};

/// One discrete measurement+feedback interval:
///   M(X_m) = (2 g_m dt / pi)^(1/4) exp(-g_m dt (X - X_m)^2)   (so that
///   the outcome resolution is 1/dX^2 = 4 g_m dt),
///   U(X_m) = exp(-i gain X_m Y dt),
///   rho' = integral dX_m U M rho M^dag U^dag,
/// averaged by shifted/scaled Gauss-Hermite quadrature with node doubling
/// until stable. The channel's mode flag is irrelevant here: the map always
/// contains the physical measurement back-action.
DensityMatrix discrete_map_oracle(const FeedbackChannel& ch, const DensityMatrix& rho,
                                  double dt, const QuadratureOptions& opts = {});

struct PovmStats {
  double mean = 0.0;
  double variance = 0.0;
  double total_probability = 0.0;
};

/// Moments of the outcome distribution p(X_m) = tr(M^dag M rho).
PovmStats povm_outcome_stats(const FeedbackChannel& ch, const DensityMatrix& rho,
                             double dt, const QuadratureOptions& opts = {});

/// Richardson-extrapolated (rho'(dt) - rho)/dt over dt, dt/2, dt/4;
/// converges to the channel generator at O(dt^3).
Matrix extrapolated_generator(const FeedbackChannel& ch, const DensityMatrix& rho,
                              double dt, const QuadratureOptions& opts = {});

/// Gauss-Hermite nodes/weights for weight exp(-t^2) (Golub-Welsch).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fbsim
