#pragma once

#include <optional>
#include <vector>

#include "fbsim/operator.hpp"

namespace fbsim {

/// Trace-one positive Hermitian matrix. Invariants are checked on demand
/// (validate()), not on every construction, so intermediate integrator
/// states stay cheap.
struct DensityMatrix {
  SpaceSignature space;
  Matrix mat;

  DensityMatrix() = default;
  DensityMatrix(SpaceSignature sp, Matrix m);

  int dim() const { return static_cast<int>(mat.rows()); }

  double trace_real() const { return mat.trace().real(); }
  double trace_defect() const { return std::abs(mat.trace() - Complex{1.0, 0.0}); }
  double hermiticity_defect() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;

  /// trace within 1e-9 of 1, Hermiticity defect <= 1e-10, min eig >= -1e-8.
  void validate() const;

  /// Population of the top retained Fock level, maximized over fock
  /// subsystems; 0 for spaces without fock subsystems.
  double truncation_metric() const;
};

DensityMatrix vacuum_state(const SpaceSignature& space);

/// One occupation number per fock subsystem (in declaration order);
/// qubit subsystems are set to |0>.
DensityMatrix fock_state(const SpaceSignature& space, const std::vector<int>& occupations);

/// Product of coherent states, one amplitude per fock subsystem; qubits |0>.
/// Amplitudes are truncated-and-renormalized expansions of exp(-|α|²/2) Σ αⁿ/√n!.
DensityMatrix coherent_product_state(const SpaceSignature& space,
                                     const std::vector<Complex>& alphas);

/// Product of qubit Bloch states (|r| <= 1), one (x,y,z) triple per qubit
/// subsystem; fock subsystems are set to vacuum.
DensityMatrix bloch_product_state(const SpaceSignature& space,
                                  const std::vector<std::array<double, 3>>& bloch);

/// Arbitrary product state from per-subsystem density matrices.
DensityMatrix product_state(const SpaceSignature& space, const std::vector<Matrix>& locals);

/// Product of thermal states with mean occupation nbar on every fock
/// subsystem (truncated geometric distribution); qubits |0>.
DensityMatrix thermal_product_state(const SpaceSignature& space, double nbar);

/// tr(M rho). Real to 1e-10 when M is Hermitian.
Complex expectation(const DensityMatrix& rho, const OperatorMatrix& m);

}  // namespace fbsim
