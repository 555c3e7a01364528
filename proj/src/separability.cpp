#include "fbsim/separability.hpp"

#include <cmath>

namespace fbsim {

void BilinearDephasingProblem::validate() const {
  if (!(gamma_a >= 0.0) || !(gamma_b >= 0.0))
    throw std::invalid_argument("BilinearDephasingProblem: rates must be >= 0");
}

double FeedbackWitness::reconstructed_gamma_a() const {
  double fb = meas_rate_b > 0.0 ? gain_b_to_a * gain_b_to_a / (4.0 * meas_rate_b) : 0.0;
  return meas_rate_a + fb;
}

double FeedbackWitness::reconstructed_gamma_b() const {
  double fb = meas_rate_a > 0.0 ? gain_a_to_b * gain_a_to_b / (4.0 * meas_rate_a) : 0.0;
  return meas_rate_b + fb;
}

double FeedbackWitness::reconstructed_coupling() const {
  return 0.5 * (gain_a_to_b + gain_b_to_a);
}

std::vector<FeedbackChannel> FeedbackWitness::channels(const OperatorMatrix& x_a,
                                                       const OperatorMatrix& x_b) const {
  FeedbackChannel a_to_b{x_a, meas_rate_a, x_b, gain_a_to_b,
                         FeedbackChannel::Mode::Probe};
  FeedbackChannel b_to_a{x_b, meas_rate_b, x_a, gain_b_to_a,
                         FeedbackChannel::Mode::Probe};
  return {a_to_b, b_to_a};
}

BilinearVerdict bilinear_verdict(const BilinearDephasingProblem& p) {
  p.validate();
  BilinearVerdict v;
  const double budget = p.gamma_a * p.gamma_b;
  v.separable = p.g * p.g <= budget;
  if (!v.separable) return v;

  FeedbackWitness w;
  if (p.g == 0.0) {
    // No feedback needed: attribute all dephasing to the measurements.
    w.meas_rate_a = p.gamma_a;
    w.meas_rate_b = p.gamma_b;
  } else {
    // Symmetric gains lambda = g on both lines cancel the cross sandwich
    // terms exactly; the measurement rates then follow from the dephasing
    // reconstruction identities (the root that stays valid as g -> 0).
    const double s = std::sqrt(std::max(0.0, 1.0 - p.g * p.g / budget));
    w.meas_rate_a = 0.5 * p.gamma_a * (1.0 + s);
    w.meas_rate_b = 0.5 * p.gamma_b * (1.0 + s);
    w.gain_a_to_b = p.g;
    w.gain_b_to_a = p.g;
  }
  v.witness = w;
  return v;
}

bool multiterm_sufficient(const std::vector<BilinearDephasingProblem>& terms,
                          std::optional<double> total_gamma_a,
                          std::optional<double> total_gamma_b) {
  double used_a = 0.0, used_b = 0.0;
  for (const auto& t : terms) {
    t.validate();
    used_a += t.gamma_a;
    used_b += t.gamma_b;
  }
  const double tol = 1e-12;
  if (total_gamma_a && used_a > *total_gamma_a * (1.0 + tol) + tol)
    throw std::invalid_argument(
        "multiterm_sufficient: allocated gamma_A budgets exceed the declared total");
  if (total_gamma_b && used_b > *total_gamma_b * (1.0 + tol) + tol)
    throw std::invalid_argument(
        "multiterm_sufficient: allocated gamma_B budgets exceed the declared total");

  for (const auto& t : terms)
    if (!bilinear_verdict(t).separable) return false;  // inconclusive
  return true;
}

void SqueezingProblem::validate() const {
  if (!(gamma_minus >= 0.0) || !(gamma_plus >= 0.0))
    throw std::invalid_argument("SqueezingProblem: rates must be >= 0");
  if (!(gamma_minus > gamma_plus))
    throw std::invalid_argument(
        "SqueezingProblem: needs gamma_minus > gamma_plus for a stationary state");
}

SqueezingVerdict squeezing_verdict(const SqueezingProblem& p) {
  p.validate();
  SqueezingVerdict v;
  v.separable_constructible = p.g12 <= p.gamma_plus;
  v.v_ss = (p.gamma_minus + p.gamma_plus) /
           (2.0 * (p.gamma_minus - p.gamma_plus + 2.0 * p.g12));
  v.entangled_steady = v.v_ss < 0.5;
  return v;
}

namespace {

OperatorMatrix joint_quadrature_square(const SpaceSignature& space, Generator gen,
                                       double sign) {
  if (space.size() != 2 || space.at(0).kind != SubsystemKind::Fock ||
      space.at(1).kind != SubsystemKind::Fock)
    throw SpaceError("duan witness needs a two-fock-mode space");
  Matrix q1 = build_generator(space, space.at(0).label, gen).mat;
  Matrix q2 = build_generator(space, space.at(1).label, gen).mat;
  Matrix q = q1 + sign * q2;
  return {space, q * q};
}

}  // namespace

OperatorMatrix duan_minus_op(const SpaceSignature& space) {
  return joint_quadrature_square(space, Generator::X, -1.0);
}

OperatorMatrix duan_plus_op(const SpaceSignature& space) {
  return joint_quadrature_square(space, Generator::Y, +1.0);
}

double duan_witness(const DensityMatrix& rho) {
  return expectation(rho, duan_minus_op(rho.space)).real() +
         expectation(rho, duan_plus_op(rho.space)).real();
}

}  // namespace fbsim
