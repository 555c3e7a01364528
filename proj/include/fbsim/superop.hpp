#pragma once

#include "fbsim/lindblad.hpp"

namespace fbsim {

/// Column-stacking vectorization: vec(A rho B) = (B^T kron A) vec(rho).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int dim);

/// Superoperator of A . B acting on vec(rho): (B^T kron A).
Matrix sandwich_superop(const Matrix& a, const Matrix& b);

/// d^2 x d^2 matrix of the generator. Guarded to total dim <= 100
/// (dense d^4 storage).
Matrix superoperator_matrix(const LindbladSpec& spec);

/// Dissipator-only superoperator of rate * D[c].
Matrix dissipator_superop(double rate, const Matrix& c);

/// Superoperator of -i[H, .].
Matrix hamiltonian_superop(const Matrix& h);

}  // namespace fbsim
