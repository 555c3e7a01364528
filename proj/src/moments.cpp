#include "fbsim/moments.hpp"

#include <cmath>
#include <sstream>

namespace fbsim {

double moment_decay_coefficient(const SqueezingProblem& p) {
  return p.gamma_minus - p.gamma_plus + 2.0 * p.g12;
}

double moment_steady_value(const SqueezingProblem& p) {
  return (p.gamma_minus + p.gamma_plus) / (2.0 * moment_decay_coefficient(p));
}

std::pair<double, double> moment_rhs(const MomentState& m, const SqueezingProblem& p) {
  const double c = moment_decay_coefficient(p);
  const double src = 0.5 * (p.gamma_minus + p.gamma_plus);
  return {-c * m.v_minus + src, -c * m.v_plus + src};
}

std::vector<MomentSample> moment_evolve(const MomentState& m0, const SqueezingProblem& p,
                                        double t_final, double dt) {
  p.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("moment_evolve: dt must be > 0");
  const double c = moment_decay_coefficient(p);
  const double vss = moment_steady_value(p);

  auto exact = [&](double v0, double t) { return vss + (v0 - vss) * std::exp(-c * t); };
  auto rhs = [&](const MomentState& m) { return moment_rhs(m, p); };

  std::vector<MomentSample> out;
  MomentState m = m0;
  double t = 0.0;
  out.push_back({t, m});
  const auto n_steps = static_cast<long>(std::llround(t_final / dt));
  for (long step = 0; step < n_steps; ++step) {
    auto k1 = rhs(m);
    auto k2 = rhs({m.v_minus + 0.5 * dt * k1.first, m.v_plus + 0.5 * dt * k1.second});
    auto k3 = rhs({m.v_minus + 0.5 * dt * k2.first, m.v_plus + 0.5 * dt * k2.second});
    auto k4 = rhs({m.v_minus + dt * k3.first, m.v_plus + dt * k3.second});
    m.v_minus += dt / 6.0 * (k1.first + 2 * k2.first + 2 * k3.first + k4.first);
    m.v_plus += dt / 6.0 * (k1.second + 2 * k2.second + 2 * k3.second + k4.second);
    t = (step + 1) * dt;

    const double scale = std::max({1.0, std::abs(m.v_minus), std::abs(m.v_plus)});
    if (std::abs(m.v_minus - exact(m0.v_minus, t)) > 1e-10 * scale ||
        std::abs(m.v_plus - exact(m0.v_plus, t)) > 1e-10 * scale) {
      std::ostringstream os;
      os << "moment_evolve: integrator disagrees with the exact exponential at t=" << t
         << " (dt=" << dt << " too coarse for decay coefficient " << c << ")";
      throw NumericError(os.str());
    }
    out.push_back({t, m});
  }
  return out;
}

LindbladSpec noisy_squeezing_spec(const SqueezingProblem& p, int fock_dim) {
  p.validate();
  SpaceSignature space = SpaceSignature::two_fock(fock_dim);
  OperatorMatrix x1 = build_generator(space, "1", Generator::X);
  OperatorMatrix x2 = build_generator(space, "2", Generator::X);
  OperatorMatrix y1 = build_generator(space, "1", Generator::Y);
  OperatorMatrix y2 = build_generator(space, "2", Generator::Y);
  Matrix h = 2.0 * p.g12 * (x1.mat * x2.mat - y1.mat * y2.mat);

  std::vector<Dissipator> diss;
  for (const char* label : {"1", "2"}) {
    diss.push_back({p.gamma_minus, build_generator(space, label, Generator::Annihilate)});
    diss.push_back({p.gamma_plus, build_generator(space, label, Generator::Create)});
  }
  return LindbladSpec(space, OperatorMatrix(space, std::move(h)), std::move(diss));
}

CrossValidationReport cross_validate(const SqueezingProblem& p, int fock_dim,
                                     double t_final) {
  p.validate();
  if (t_final <= 0.0) t_final = 5.0 / p.gamma_minus;

  LindbladSpec spec = noisy_squeezing_spec(p, fock_dim);
  DensityMatrix rho0 = vacuum_state(spec.space());

  EvolveOptions opts;
  opts.observables = {{"v_minus", duan_minus_op(spec.space())},
                      {"v_plus", duan_plus_op(spec.space())}};
  const double scale = moment_decay_coefficient(p) +
                       2.0 * (p.gamma_minus + p.gamma_plus) * fock_dim;
  double dt = 0.5 / scale;
  opts.stride = std::max(1, static_cast<int>(std::ceil(t_final / dt / 200.0)));
  Trajectory traj = evolve(spec, rho0, t_final, dt, opts);

  CrossValidationReport rep;
  rep.truncation_metric = traj.truncation_metric;
  rep.tolerance = std::max(1e-3, rep.truncation_metric);
  rep.times = traj.times;

  const double c = moment_decay_coefficient(p);
  const double vss = moment_steady_value(p);
  const double v0 = 0.5;  // vacuum
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double expected = vss + (v0 - vss) * std::exp(-c * traj.times[i]);
    rep.v_minus_full.push_back(traj.column("v_minus")[i]);
    rep.v_plus_full.push_back(traj.column("v_plus")[i]);
    rep.v_minus_closed.push_back(expected);
    rep.v_plus_closed.push_back(expected);
    rep.max_deviation = std::max(
        {rep.max_deviation, std::abs(rep.v_minus_full.back() - expected),
         std::abs(rep.v_plus_full.back() - expected)});
  }
  rep.ok = rep.max_deviation <= rep.tolerance;
  std::ostringstream os;
  if (!rep.ok && rep.truncation_metric > 1e-3)
    os << "deviation " << rep.max_deviation << " with truncation metric "
       << rep.truncation_metric << ": increase fock_dim";
  else
    os << "max deviation " << rep.max_deviation << " (tolerance " << rep.tolerance
       << ", truncation metric " << rep.truncation_metric << ")";
  rep.message = os.str();
  return rep;
}

}  // namespace fbsim
