#include "fbsim/feedback.hpp"

#include <cmath>
#include <sstream>

namespace fbsim {

namespace {
constexpr Complex kI{0.0, 1.0};
}

void FeedbackChannel::validate() const {
  require_same_space(X.space, Y.space, "FeedbackChannel");
  if (!X.is_hermitian())
    throw std::invalid_argument("FeedbackChannel: X is not Hermitian");
  if (!Y.is_hermitian())
    throw std::invalid_argument("FeedbackChannel: Y is not Hermitian");
  if (!(meas_rate >= 0.0))
    throw std::invalid_argument("FeedbackChannel: meas_rate must be >= 0");
  if (gain != 0.0 && meas_rate <= 0.0)
    throw std::invalid_argument(
        "FeedbackChannel: feedback requires a signal (gain != 0 needs meas_rate > 0)");
}

Matrix SandwichTerm::apply(const Matrix& rho) const {
  Matrix t = X.mat * rho + rho * X.mat;
  return -kI * (lambda / 2.0) * (Y.mat * t - t * Y.mat);
}

Matrix SandwichTerm::superop() const {
  const int d = X.dim();
  Matrix id = Matrix::Identity(d, d);
  // vec(-i l/2 (Y(X rho + rho X) - (X rho + rho X)Y))
  Matrix inner = sandwich_superop(X.mat, id) + sandwich_superop(id, X.mat);
  Matrix lift = sandwich_superop(Y.mat, id) - sandwich_superop(id, Y.mat);
  return -kI * (lambda / 2.0) * (lift * inner);
}

Matrix GeneratorDelta::superop() const {
  Matrix out = hamiltonian_superop(hamiltonian_term.mat);
  for (const auto& diss : dissipator_terms)
    out += dissipator_superop(diss.rate, diss.jump.mat);
  if (sandwich_term) out += sandwich_term->superop();
  return out;
}

Matrix GeneratorDelta::apply(const Matrix& rho) const {
  const Matrix& h = hamiltonian_term.mat;
  Matrix out = -kI * (h * rho - rho * h);
  for (const auto& diss : dissipator_terms) {
    const Matrix& c = diss.jump.mat;
    Matrix cdc = c.adjoint() * c;
    out += diss.rate * (c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc));
  }
  if (sandwich_term) out += sandwich_term->apply(rho);
  return out;
}

GeneratorDelta channel_generator(const FeedbackChannel& ch, DeltaForm form) {
  ch.validate();
  const SpaceSignature& space = ch.space();

  GeneratorDelta delta;
  // Reduction law: H_eff = (lambda/4) {X, Y}. For the QND case
  // lambda = -2 gamma_m this is -(gamma_m/2)(XY + YX).
  delta.hamiltonian_term =
      OperatorMatrix(space, (ch.gain / 4.0) * (ch.X.mat * ch.Y.mat + ch.Y.mat * ch.X.mat));

  if (form == DeltaForm::Expanded) {
    if (ch.mode == FeedbackChannel::Mode::Probe && ch.meas_rate > 0.0)
      delta.dissipator_terms.push_back({ch.meas_rate, ch.X});
    if (ch.gain != 0.0) {
      delta.dissipator_terms.push_back(
          {ch.gain * ch.gain / (4.0 * ch.meas_rate), ch.Y});
      delta.sandwich_term = SandwichTerm{ch.Y, ch.X, ch.gain};
    }
    return delta;
  }

  // Compact: single jump c = sqrt(g_m) X - i (lambda / (2 sqrt(g_m))) Y at
  // rate 1, with the measurement dephasing subtracted again in passive mode.
  if (ch.meas_rate > 0.0) {
    const double root = std::sqrt(ch.meas_rate);
    Matrix c = root * ch.X.mat - kI * (ch.gain / (2.0 * root)) * ch.Y.mat;
    delta.dissipator_terms.push_back({1.0, OperatorMatrix(space, std::move(c))});
    if (ch.mode == FeedbackChannel::Mode::Passive)
      delta.dissipator_terms.push_back({-ch.meas_rate, ch.X});
  }
  return delta;
}

BudgetReport certify_budget(const LindbladSpec& base, const FeedbackChannel& ch) {
  ch.validate();
  require_same_space(base.space(), ch.space(), "certify_budget");

  DissipativePart part(base.space());
  part.add(base);

  BudgetReport rep;
  rep.available_rate = part.directional_rate(ch.X.mat);
  rep.required_rate = ch.meas_rate;
  const double tol = 1e-10 * std::max(1.0, ch.meas_rate);
  rep.ok = rep.available_rate >= ch.meas_rate - tol;

  std::ostringstream os;
  os << "passive budget: base carries X-directed dephasing at rate "
     << rep.available_rate << ", channel requires " << rep.required_rate << " -> "
     << (rep.ok ? "ok" : "INSUFFICIENT");
  rep.text = os.str();
  return rep;
}

LindbladSpec compose_feedback(const LindbladSpec& base,
                              const std::vector<FeedbackChannel>& channels) {
  Matrix h_total = base.hamiltonian().mat;
  DissipativePart part(base.space());
  part.add(base);

  for (const auto& ch : channels) {
    ch.validate();
    require_same_space(base.space(), ch.space(), "compose_feedback");
    if (ch.mode == FeedbackChannel::Mode::Passive) {
      BudgetReport rep = certify_budget(base, ch);
      if (!rep.ok) throw PassiveBudgetError("compose_feedback: " + rep.text);
    }
    GeneratorDelta delta = channel_generator(ch, DeltaForm::Compact);
    h_total += delta.hamiltonian_term.mat;
    for (const auto& diss : delta.dissipator_terms)
      part.add(diss.rate, diss.jump.mat);
  }

  h_total += part.hamiltonian_correction();
  std::vector<Dissipator> dissipators = part.decompose();
  return LindbladSpec(base.space(), OperatorMatrix(base.space(), std::move(h_total)),
                      std::move(dissipators));
}

std::vector<FeedbackChannel> qnd_cross_channels(const OperatorMatrix& x_a,
                                                const OperatorMatrix& x_b,
                                                double gamma) {
  FeedbackChannel a_to_b{x_a, gamma, x_b, -2.0 * gamma, FeedbackChannel::Mode::Probe};
  FeedbackChannel b_to_a{x_b, gamma, x_a, -2.0 * gamma, FeedbackChannel::Mode::Probe};
  return {a_to_b, b_to_a};
}

LindbladSpec squeeze_feedback_base(const SpaceSignature& space, double kappa) {
  std::vector<Dissipator> loss;
  for (const auto& sub : space.subsystems())
    loss.push_back({2.0 * kappa, build_generator(space, sub.label, Generator::Annihilate)});
  return LindbladSpec(space, zero_op(space), std::move(loss));
}

std::vector<FeedbackChannel> squeeze_feedback_channels(const SpaceSignature& space,
                                                       double kappa) {
  if (space.size() != 2)
    throw SpaceError("squeeze_feedback needs a two-mode space");
  const std::string& l1 = space.at(0).label;
  const std::string& l2 = space.at(1).label;
  OperatorMatrix x1 = build_generator(space, l1, Generator::X);
  OperatorMatrix x2 = build_generator(space, l2, Generator::X);
  OperatorMatrix y1 = build_generator(space, l1, Generator::Y);
  OperatorMatrix y2 = build_generator(space, l2, Generator::Y);

  // Heterodyne splits the emission between the quadratures: kappa/2 per
  // quadrature, feedback gains +-2 kappa on the opposite mode.
  const double gm = kappa / 2.0;
  const auto passive = FeedbackChannel::Mode::Passive;
  return {
      {x1, gm, x2, 2.0 * kappa, passive},
      {x2, gm, x1, 2.0 * kappa, passive},
      {y1, gm, y2, -2.0 * kappa, passive},
      {y2, gm, y1, -2.0 * kappa, passive},
  };
}

LindbladSpec squeeze_feedback(double kappa, int fock_dim) {
  SpaceSignature space = SpaceSignature::two_fock(fock_dim);
  LindbladSpec base = squeeze_feedback_base(space, kappa);
  return compose_feedback(base, squeeze_feedback_channels(space, kappa));
}

}  // namespace fbsim
