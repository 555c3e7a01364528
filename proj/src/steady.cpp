#include "fbsim/steady.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace fbsim {

namespace {

SteadyStateResult null_space_route(const LindbladSpec& spec) {
  const int d = spec.space().total_dim();
  Matrix lop = superoperator_matrix(spec);

  Eigen::BDCSVD<Matrix> svd(lop, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() ? sv(0) : 0.0;
  const double tol = std::max(1e-12, 1e-10 * sigma_max);

  int nullity = 0;
  for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= tol; --i) ++nullity;
  if (nullity == 0) nullity = 1;  // smallest singular vector is the best candidate

  SteadyStateResult res;
  res.used_null_space = true;
  res.multiplicity = nullity;
  if (nullity > 1) {
    for (int k = 0; k < nullity; ++k)
      res.basis.push_back(unvec(svd.matrixV().col(sv.size() - 1 - k), d));
    res.residual_norm = sv(sv.size() - 1);
    return res;
  }

  Matrix rho = unvec(svd.matrixV().col(sv.size() - 1), d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw NumericError("steady_state: null vector has vanishing trace");
  rho /= tr;
  DensityMatrix dm(spec.space(), std::move(rho));
  res.residual_norm = apply_generator(spec, dm).norm();
  res.truncation_metric = dm.truncation_metric();
  res.rho = std::move(dm);
  return res;
}

SteadyStateResult evolve_route(const LindbladSpec& spec,
                               const SteadyStateOptions& opts) {
  const int d = spec.space().total_dim();
  CompiledGenerator gen(spec);

  Matrix rho;
  if (opts.guess) {
    require_same_space(spec.space(), opts.guess->space, "steady_state guess");
    rho = opts.guess->mat;
  } else {
    rho = Matrix::Identity(d, d) / double(d);
  }

  const double scale = gen.spectral_scale();
  const double dt = 1.8 / scale;

  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  double t = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  while (t < opts.max_time) {
    for (int s = 0; s < opts.check_every; ++s) {
      gen.apply(rho, k1);
      tmp = rho + (0.5 * dt) * k1;
      gen.apply(tmp, k2);
      tmp = rho + (0.5 * dt) * k2;
      gen.apply(tmp, k3);
      tmp = rho + dt * k3;
      gen.apply(tmp, k4);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    if (!rho.allFinite())
      throw NumericError("steady_state: evolution blew up at t = " + std::to_string(t));
    gen.apply(rho, k1);
    residual = k1.norm();
    if (residual <= opts.residual_tol) break;
  }
  if (residual > opts.residual_tol)
    throw NumericError("steady_state: residual " + std::to_string(residual) +
                       " did not reach tolerance within max_time (possibly a "
                       "degenerate steady state; use the null-space route)");

  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  DensityMatrix dm(spec.space(), std::move(rho));

  SteadyStateResult res;
  res.residual_norm = apply_generator(spec, dm).norm();
  res.truncation_metric = dm.truncation_metric();
  res.evolved_time = t;
  res.rho = std::move(dm);
  return res;
}

}  // namespace

SteadyStateResult steady_state(const LindbladSpec& spec,
                               const SteadyStateOptions& opts) {
  if (spec.space().total_dim() <= opts.null_space_dim_cap)
    return null_space_route(spec);
  return evolve_route(spec, opts);
}

}  // namespace fbsim
