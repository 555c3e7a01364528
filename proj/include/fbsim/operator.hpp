#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "fbsim/space.hpp"

namespace fbsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense operator on the full tensor space described by `space`.
struct OperatorMatrix {
  SpaceSignature space;
  Matrix mat;

  OperatorMatrix() = default;
  OperatorMatrix(SpaceSignature sp, Matrix m);

  int dim() const { return static_cast<int>(mat.rows()); }

  OperatorMatrix adjoint() const { return {space, mat.adjoint()}; }

  /// max|M - M^dag| <= 1e-12 * max|M| (zero matrices count as Hermitian).
  bool is_hermitian() const;
  double hermiticity_defect() const;  // max|M - M^dag|
};

/// Named single-subsystem generators. Quadrature convention is
/// x = (a + a^dag)/2, y = (a - a^dag)/(2i), so a = x + i y and the vacuum
/// has <x^2> = 1/4.
enum class Generator {
  Annihilate,  // fock
  Create,      // fock
  X,           // fock quadrature
  Y,           // fock quadrature
  Number,      // fock
  PauliX,      // qubit
  PauliY,      // qubit
  PauliZ,      // qubit
  Identity,    // any
};

Generator generator_from_name(const std::string& name);
std::string generator_name(Generator g);

/// Local (subsystem-sized) matrix of a generator.
Matrix local_generator(Generator g, SubsystemKind kind, int dim);

/// Generator on subsystem `label`, embedded in the full space
/// (identity on all other subsystems).
OperatorMatrix build_generator(const SpaceSignature& space,
                               const std::string& label, Generator g);
OperatorMatrix build_generator(const SpaceSignature& space,
                               const std::string& label,
                               const std::string& generator_name);

/// Arbitrary local matrix embedded at subsystem index `sub`.
OperatorMatrix embed(const SpaceSignature& space, std::size_t sub,
                     const Matrix& local);

OperatorMatrix identity_op(const SpaceSignature& space);
OperatorMatrix zero_op(const SpaceSignature& space);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix anticommutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Kronecker product with the first factor as the slow index.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace fbsim
