#pragma once

#include <random>

#include "fbsim/states.hpp"

namespace fbsim {

inline Matrix random_hermitian(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint()).eval();
}

/// Full-rank random density matrix (Wishart-style).
inline Matrix random_density(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  Matrix rho = m * m.adjoint();
  rho /= rho.trace();
  return rho;
}

/// Random pure-state density matrix supported on the lowest `support` levels
/// (keeps truncated-space quadrature identities honest).
inline Matrix random_low_density(std::mt19937& rng, int dim, int support) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector psi = Vector::Zero(dim);
  for (int i = 0; i < std::min(dim, support); ++i) psi(i) = Complex(g(rng), g(rng));
  psi /= psi.norm();
  return psi * psi.adjoint();
}

}  // namespace fbsim
