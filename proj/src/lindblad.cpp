#include "fbsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fbsim {

namespace {
constexpr Complex kI{0.0, 1.0};
}

LindbladSpec::LindbladSpec(SpaceSignature space, OperatorMatrix hamiltonian,
                           std::vector<Dissipator> dissipators)
    : space_(std::move(space)),
      hamiltonian_(std::move(hamiltonian)),
      dissipators_(std::move(dissipators)) {
  require_same_space(space_, hamiltonian_.space, "LindbladSpec hamiltonian");
  if (!hamiltonian_.is_hermitian())
    throw std::invalid_argument("LindbladSpec: hamiltonian is not Hermitian (defect " +
                                std::to_string(hamiltonian_.hermiticity_defect()) + ")");
  for (const auto& d : dissipators_) {
    require_same_space(space_, d.jump.space, "LindbladSpec dissipator");
    if (!(d.rate >= 0.0))
      throw std::invalid_argument("LindbladSpec: negative dissipator rate " +
                                  std::to_string(d.rate));
  }
}

LindbladSpec LindbladSpec::zero(const SpaceSignature& space) {
  return LindbladSpec(space, zero_op(space), {});
}

Matrix apply_generator(const LindbladSpec& spec, const DensityMatrix& rho) {
  require_same_space(spec.space(), rho.space, "apply_generator");
  CompiledGenerator gen(spec);
  return gen.apply(rho.mat);
}

Matrix apply_adjoint_generator(const LindbladSpec& spec, const Matrix& obs) {
  const Matrix& h = spec.hamiltonian().mat;
  Matrix out = kI * (h * obs - obs * h);
  for (const auto& d : spec.dissipators()) {
    const Matrix& c = d.jump.mat;
    Matrix cdc = c.adjoint() * c;
    out += d.rate * (c.adjoint() * obs * c - 0.5 * (cdc * obs + obs * cdc));
  }
  return out;
}

CompiledGenerator::CompiledGenerator(const LindbladSpec& spec)
    : space_(spec.space()) {
  const int d = space_.total_dim();
  big_g_ = -kI * spec.hamiltonian().mat;
  for (const auto& diss : spec.dissipators()) {
    if (diss.rate == 0.0) continue;
    big_g_.noalias() -= 0.5 * diss.rate * (diss.jump.mat.adjoint() * diss.jump.mat);
    jumps_.emplace_back(diss.rate, diss.jump.mat);
  }
  scratch_.resize(d, d);
}

void CompiledGenerator::apply(const Matrix& rho, Matrix& out) const {
  out.noalias() = big_g_ * rho;
  out.noalias() += rho * big_g_.adjoint();
  for (const auto& [rate, c] : jumps_) {
    scratch_.noalias() = c * rho;
    out.noalias() += rate * (scratch_ * c.adjoint());
  }
}

Matrix CompiledGenerator::apply(const Matrix& rho) const {
  Matrix out(rho.rows(), rho.cols());
  apply(rho, out);
  return out;
}

double CompiledGenerator::spectral_scale() const {
  // power iteration for ||G||_2; jump sandwiches are bounded by the same
  // c^dag c content already folded into G, so 4*||G|| bounds the generator.
  const int d = static_cast<int>(big_g_.rows());
  if (d == 0) return 0.0;
  Vector v = Vector::Ones(d) / std::sqrt(double(d));
  double norm = 0.0;
  for (int it = 0; it < 12; ++it) {
    Vector w = big_g_.adjoint() * (big_g_ * v);
    norm = std::sqrt(w.norm());
    if (norm == 0.0) break;
    v = w / w.norm();
  }
  return 4.0 * norm + 1e-30;
}

namespace {

struct Recorder {
  const EvolveOptions& opts;
  Trajectory traj;

  void sample(double t, const Matrix& rho, const SpaceSignature& space) {
    traj.times.push_back(t);
    DensityMatrix dm(space, rho);
    for (std::size_t k = 0; k < opts.observables.size(); ++k) {
      Complex v = (opts.observables[k].op.mat * rho).trace();
      traj.columns[k].push_back(v.real());
    }
    traj.truncation_metric = std::max(traj.truncation_metric, dm.truncation_metric());
    if (opts.store_states) traj.states.push_back(std::move(dm));
  }
};

Trajectory run_fixed(const CompiledGenerator& gen, const SpaceSignature& space,
                     const Matrix& rho0, double t_final, double dt, int stride,
                     const EvolveOptions& opts, Matrix* final_state) {
  Recorder rec{opts, {}};
  rec.traj.names.reserve(opts.observables.size());
  for (const auto& ob : opts.observables) rec.traj.names.push_back(ob.name);
  rec.traj.columns.assign(opts.observables.size(), {});
  rec.traj.dt_used = dt;

  const auto n_steps = static_cast<long>(std::llround(t_final / dt));
  Matrix rho = rho0;
  const int d = static_cast<int>(rho.rows());
  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);

  rec.sample(0.0, rho, space);
  for (long step = 0; step < n_steps; ++step) {
    gen.apply(rho, k1);
    tmp = rho + (0.5 * dt) * k1;
    gen.apply(tmp, k2);
    tmp = rho + (0.5 * dt) * k2;
    gen.apply(tmp, k3);
    tmp = rho + dt * k3;
    gen.apply(tmp, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!rho.allFinite()) {
      std::ostringstream os;
      os << "integrator blow-up at step " << (step + 1) << " (t = "
         << (step + 1) * dt << ", dt = " << dt << ")";
      throw NumericError(os.str());
    }
    if ((step + 1) % stride == 0 || step + 1 == n_steps)
      rec.sample((step + 1) * dt, rho, space);
  }
  if (final_state) *final_state = std::move(rho);
  return rec.traj;
}

double max_rel_change(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.columns.size(); ++k) {
    double scale = 1e-12;
    for (double v : a.columns[k]) scale = std::max(scale, std::abs(v));
    std::size_t n = std::min(a.columns[k].size(), b.columns[k].size());
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst,
                       std::abs(a.columns[k][i] - b.columns[k][i]) / scale);
  }
  return worst;
}

}  // namespace

const std::vector<double>& Trajectory::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return columns[k];
  throw std::out_of_range("trajectory has no column '" + name + "'");
}

Trajectory evolve(const LindbladSpec& spec, const DensityMatrix& rho0,
                  double t_final, double dt, const EvolveOptions& opts) {
  require_same_space(spec.space(), rho0.space, "evolve");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
  if (!(t_final >= 0.0)) throw std::invalid_argument("evolve: t_final must be >= 0");

  CompiledGenerator gen(spec);

  Matrix final_a;
  Trajectory current = run_fixed(gen, spec.space(), rho0.mat, t_final, dt,
                                 opts.stride, opts, &final_a);
  if (!opts.refine || t_final == 0.0) return current;

  double step = dt;
  int stride = opts.stride;
  for (int h = 0; h < opts.max_halvings; ++h) {
    step *= 0.5;
    stride *= 2;
    Matrix final_b;
    Trajectory finer = run_fixed(gen, spec.space(), rho0.mat, t_final, step,
                                 stride, opts, &final_b);
    finer.halvings = h + 1;
    // With no observables declared, fall back to the final-state distance.
    double change = opts.observables.empty()
                        ? (final_b - final_a).norm()
                        : max_rel_change(current, finer);
    current = std::move(finer);
    final_a = std::move(final_b);
    if (change < opts.rel_tol) return current;
  }
  throw NumericError("evolve: step halving did not converge below rel_tol " +
                     std::to_string(opts.rel_tol) + " after " +
                     std::to_string(opts.max_halvings) + " halvings (dt now " +
                     std::to_string(step) + ")");
}

}  // namespace fbsim
