#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbsim/states.hpp"

namespace fbsim {

/// Integrator blow-up / convergence failure. Carries a human-readable step
/// report; the CLI maps it to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dissipator {
  double rate = 0.0;  // 1/time, >= 0
  OperatorMatrix jump;
};

/// Hamiltonian (angular frequency, hbar = 1) plus a list of
/// (rate, jump) dissipators, all on one space. Rates must be >= 0;
/// construction rejects anything else.
class LindbladSpec {
 public:
  LindbladSpec(SpaceSignature space, OperatorMatrix hamiltonian,
               std::vector<Dissipator> dissipators);

  static LindbladSpec zero(const SpaceSignature& space);

  const SpaceSignature& space() const { return space_; }
  const OperatorMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<Dissipator>& dissipators() const { return dissipators_; }

 private:
  SpaceSignature space_;
  OperatorMatrix hamiltonian_;
  std::vector<Dissipator> dissipators_;
};

/// drho/dt = -i[H, rho] + sum_k r_k (c_k rho c_k^dag - 1/2 {c_k^dag c_k, rho}).
Matrix apply_generator(const LindbladSpec& spec, const DensityMatrix& rho);

/// Adjoint (Heisenberg) generator acting on an observable.
Matrix apply_adjoint_generator(const LindbladSpec& spec, const Matrix& obs);

/// Precomputed form of the generator for tight loops:
/// L(rho) = G rho + rho G^dag + sum_k r_k c_k rho c_k^dag,
/// with G = -iH - 1/2 sum_k r_k c_k^dag c_k.
class CompiledGenerator {
 public:
  explicit CompiledGenerator(const LindbladSpec& spec);

  const SpaceSignature& space() const { return space_; }
  void apply(const Matrix& rho, Matrix& out) const;
  Matrix apply(const Matrix& rho) const;

  /// Upper bound estimate for the generator's spectral radius, used to pick
  /// stable RK4 steps.
  double spectral_scale() const;

 private:
  SpaceSignature space_;
  Matrix big_g_;
  std::vector<std::pair<double, Matrix>> jumps_;
  mutable Matrix scratch_;
};

struct Observable {
  std::string name;
  OperatorMatrix op;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // columns[k][i] = names[k] at times[i]
  std::vector<DensityMatrix> states;         // filled when store_states
  double truncation_metric = 0.0;            // max top-Fock-level population seen
  double dt_used = 0.0;
  int halvings = 0;

  const std::vector<double>& column(const std::string& name) const;
};

struct EvolveOptions {
  std::vector<Observable> observables;
  int stride = 1;             // record every `stride` steps
  bool store_states = false;  // also keep the sampled density matrices
  bool refine = true;         // halve dt until observables move < rel_tol
  double rel_tol = 1e-8;
  int max_halvings = 12;
};

/// Fixed-step RK4 integration with automatic step-halving convergence check
/// on the recorded observables. States are never renormalized.
Trajectory evolve(const LindbladSpec& spec, const DensityMatrix& rho0,
                  double t_final, double dt, const EvolveOptions& opts = {});

}  // namespace fbsim
