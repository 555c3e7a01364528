#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbsim/kossakowski.hpp"
#include "fbsim/superop.hpp"

namespace fbsim {

/// A passive channel assumes measurement dephasing the base does not carry.
/// The CLI maps this to exit code 2, like any other composition failure.
class PassiveBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuous measurement of Hermitian X (resolution 1/dX^2 = 4 meas_rate dt)
/// driving a conditional Hamiltonian gain * X_m * Y.
///
/// probe:   the channel adds its measurement dephasing meas_rate * D[X].
/// passive: the dephasing is already present in the base generator (the
///          detector watches light the system emits anyway), so the channel
///          delta removes it again; compose_feedback certifies the budget.
struct FeedbackChannel {
  enum class Mode { Probe, Passive };

  OperatorMatrix X;
  double meas_rate = 0.0;  // gamma_m >= 0
  OperatorMatrix Y;
  double gain = 0.0;  // lambda (frequency)
  Mode mode = Mode::Probe;

  void validate() const;
  const SpaceSignature& space() const { return X.space; }
};

/// -i (lambda/2) [Y, X rho + rho X] -- the measurement/feedback correlation
/// term of the expanded form, kept explicit only for diagnostics.
struct SandwichTerm {
  OperatorMatrix Y;
  OperatorMatrix X;
  double lambda = 0.0;

  Matrix apply(const Matrix& rho) const;
  Matrix superop() const;
};

/// Additive generator contribution of one channel. The compact form carries
/// no sandwich remainder; the expanded form keeps it explicit. Dissipator
/// rates in a delta may be negative (passive mode removes base dephasing);
/// compose_feedback is responsible for re-expressing the total with
/// nonnegative rates or failing.
struct GeneratorDelta {
  OperatorMatrix hamiltonian_term;
  std::vector<Dissipator> dissipator_terms;  // rates here may be negative
  std::optional<SandwichTerm> sandwich_term;

  Matrix superop() const;  // guarded like superoperator_matrix
  Matrix apply(const Matrix& rho) const;
};

enum class DeltaForm { Compact, Expanded };

/// Effective generator of a single channel.
///
/// Expanded (probe): meas_rate D[X] + (gain^2/(4 meas_rate)) D[Y]
///                   - i(gain/2) [Y, X rho + rho X]
/// Compact  (probe): H_eff = (gain/4){X,Y},
///                   jump c = sqrt(meas_rate) X - i (gain/(2 sqrt(meas_rate))) Y.
/// Passive mode omits meas_rate D[X] (expanded) / subtracts it (compact).
GeneratorDelta channel_generator(const FeedbackChannel& ch,
                                 DeltaForm form = DeltaForm::Compact);

struct BudgetReport {
  bool ok = false;
  double available_rate = 0.0;  // X-directed dephasing the base carries
  double required_rate = 0.0;   // channel meas_rate
  std::string text;
};

/// Does the base generator already contain X-directed dephasing at the
/// channel's measurement rate? (Passive channels only make sense when yes.)
BudgetReport certify_budget(const LindbladSpec& base, const FeedbackChannel& ch);

/// Base generator plus all channel deltas, re-expressed as a valid
/// LindbladSpec. Throws NotCompletelyPositive when residual sandwich terms
/// cannot be absorbed into nonnegative rates, PassiveBudgetError when a
/// passive channel's dephasing budget is missing from the base.
LindbladSpec compose_feedback(const LindbladSpec& base,
                              const std::vector<FeedbackChannel>& channels);

/// The two QND cross-channels realizing H_eff = -2 gamma X_A X_B with
/// doubled dephasing (feedback Hamiltonians -2 gamma X_m Y on each line).
std::vector<FeedbackChannel> qnd_cross_channels(const OperatorMatrix& x_a,
                                                const OperatorMatrix& x_b,
                                                double gamma);

/// Two decaying cavity modes (rate 2 kappa each) with heterodyne detection
/// of both quadratures (per-quadrature measurement rate kappa/2) feeding
/// back at gains +-2 kappa: the two-mode squeezing preset. The composed
/// generator has H = kappa (a1 a2 + a1^dag a2^dag) and dissipators
/// 3 kappa D[a_j] + kappa D[a_j^dag] per mode.
LindbladSpec squeeze_feedback(double kappa, int fock_dim);

/// The four channels of the preset on an existing two-mode space.
std::vector<FeedbackChannel> squeeze_feedback_channels(const SpaceSignature& space,
                                                       double kappa);
LindbladSpec squeeze_feedback_base(const SpaceSignature& space, double kappa);

}  // namespace fbsim
