#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbsim/lindblad.hpp"

namespace fbsim {

/// Composition produced a dissipative part that is not expressible with
/// nonnegative rates. The CLI maps this to exit code 2.
class NotCompletelyPositive : public std::runtime_error {
 public:
  NotCompletelyPositive(const std::string& msg, double min_eigenvalue)
      : std::runtime_error(msg), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Dissipative part of a generator, represented by the Kossakowski matrix
/// over the (orthonormalized, traceless) span of its jump operators.
///
/// sum_k w_k D[c_k]  =  sum_ij K_ij (E_i rho E_j^dag - 1/2 {E_j^dag E_i, rho})
///                      - i [H_corr, rho]
///
/// where {E_i} is a Hilbert-Schmidt-orthonormal basis of the span of the
/// traceless parts c_k - tr(c_k)/d, H_corr collects the Hamiltonian shifts
/// induced by the trace parts, and weights w_k may be negative (used when a
/// passive channel removes measurement dephasing that the base carries).
/// This form is unique given the basis, so comparing two dissipative parts
/// reduces to comparing (K, H_corr) over a joint span -- valid at any
/// Hilbert-space dimension, no d^2 x d^2 materialization needed.
class DissipativePart {
 public:
  explicit DissipativePart(const SpaceSignature& space);

  void add(double weight, const Matrix& jump);
  void add(const LindbladSpec& spec);  // all dissipators of spec
  void subtract(const LindbladSpec& spec);

  const SpaceSignature& space() const { return space_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& kossakowski() const { return k_; }
  const Matrix& hamiltonian_correction() const { return h_corr_; }

  double min_eigenvalue() const;
  double max_abs_eigenvalue() const;
  bool is_completely_positive(double tol = 1e-10) const;

  /// Rate of X-directed dephasing contained in this part:
  /// <Xhat| K |Xhat> / ||X_t||^2 with Xhat = X_t/||X_t||.
  double directional_rate(const Matrix& x) const;

  /// Extract (rate, jump) pairs by eigendecomposition of K, done block by
  /// block over the connected components of K's sparsity pattern so that
  /// uncoupled directions never mix. Rates below -tol throw
  /// NotCompletelyPositive; rates within [-tol, drop_tol] are dropped.
  std::vector<Dissipator> decompose(double tol = 1e-10,
                                    double drop_tol = 1e-12) const;

  /// Frobenius distance to another dissipative part over the joint span
  /// (plus the Hamiltonian-correction mismatch). Zero iff the two parts are
  /// the same superoperator.
  double distance(const DissipativePart& other) const;

 private:
  int project_or_extend(const Matrix& traceless);

  SpaceSignature space_;
  std::vector<Matrix> basis_;  // HS-orthonormal, traceless
  Matrix k_;                   // Hermitian, basis_.size() square
  Matrix h_corr_;
};

}  // namespace fbsim
