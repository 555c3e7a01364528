#pragma once

#include <optional>

#include "fbsim/feedback.hpp"

namespace fbsim {

/// H0 = g X_A X_B with local dephasing gamma_A D[X_A] + gamma_B D[X_B].
struct BilinearDephasingProblem {
  double g = 0.0;        // coupling frequency
  double gamma_a = 0.0;  // >= 0
  double gamma_b = 0.0;  // >= 0

  void validate() const;
};

/// Parameters of the two cross QND feedback lines that reproduce a
/// separable bilinear problem exactly:
///   dephasing on A: meas_rate_a + gain_b_to_a^2/(4 meas_rate_b) = gamma_A
///   dephasing on B: meas_rate_b + gain_a_to_b^2/(4 meas_rate_a) = gamma_B
///   coupling:       (gain_a_to_b + gain_b_to_a)/2 = g
struct FeedbackWitness {
  double meas_rate_a = 0.0;
  double meas_rate_b = 0.0;
  double gain_a_to_b = 0.0;
  double gain_b_to_a = 0.0;

  double reconstructed_gamma_a() const;
  double reconstructed_gamma_b() const;
  double reconstructed_coupling() const;

  /// The two probe channels on concrete observables.
  std::vector<FeedbackChannel> channels(const OperatorMatrix& x_a,
                                        const OperatorMatrix& x_b) const;
};

struct BilinearVerdict {
  bool separable = false;
  std::optional<FeedbackWitness> witness;
};

/// Separable iff g^2 <= gamma_A gamma_B (boundary counts as separable).
/// When separable, returns the symmetric-gain witness: both gains equal g and
/// meas_rate = (gamma/2)(1 + sqrt(1 - g^2/(gamma_A gamma_B))) per side, which
/// reduces to meas_rate = gamma/2 and |gain| = sqrt(gamma_A gamma_B) at the
/// boundary and satisfies the reconstruction identities exactly everywhere.
BilinearVerdict bilinear_verdict(const BilinearDephasingProblem& p);

/// Sufficient-only combination rule: true iff every term passes
/// bilinear_verdict with its allocated dephasing budget. A false result is
/// inconclusive (a smarter decomposition might still be separable).
/// When totals are given, the per-term allocations must not exceed them.
bool multiterm_sufficient(const std::vector<BilinearDephasingProblem>& terms,
                          std::optional<double> total_gamma_a = std::nullopt,
                          std::optional<double> total_gamma_b = std::nullopt);

/// Two-mode squeezing at rate g12 against photon loss gamma_minus and gain
/// gamma_plus (gamma_minus > gamma_plus for a stationary state).
struct SqueezingProblem {
  double g12 = 0.0;
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;

  void validate() const;
};

struct SqueezingVerdict {
  bool separable_constructible = false;  // g12 <= gamma_plus
  double v_ss = 0.0;  // steady <(x1-x2)^2> = (g- + g+)/(2(g- - g+ + 2 g12))
  bool entangled_steady = false;  // v_ss < 1/2, equivalent to g12 > gamma_plus
};

SqueezingVerdict squeezing_verdict(const SqueezingProblem& p);

/// <(x1-x2)^2> + <(y1+y2)^2> on a two-fock-mode state. Values below 1 (the
/// two-mode vacuum level in this normalization) certify entanglement.
double duan_witness(const DensityMatrix& rho);

/// The joint-quadrature observables (x1-x2)^2 and (y1+y2)^2.
OperatorMatrix duan_minus_op(const SpaceSignature& space);
OperatorMatrix duan_plus_op(const SpaceSignature& space);

}  // namespace fbsim
