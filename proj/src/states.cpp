#include "fbsim/states.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace fbsim {

DensityMatrix::DensityMatrix(SpaceSignature sp, Matrix m)
    : space(std::move(sp)), mat(std::move(m)) {
  if (mat.rows() != mat.cols() || mat.rows() != space.total_dim())
    throw SpaceError("density matrix dimension does not match its space");
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (mat + mat.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  if (trace_defect() > 1e-9)
    throw std::runtime_error("density matrix trace deviates from 1 by " +
                             std::to_string(trace_defect()));
  if (hermiticity_defect() > 1e-10)
    throw std::runtime_error("density matrix Hermiticity defect " +
                             std::to_string(hermiticity_defect()));
  double lmin = min_eigenvalue();
  if (lmin < -1e-8)
    throw std::runtime_error("density matrix min eigenvalue " + std::to_string(lmin));
}

double DensityMatrix::truncation_metric() const {
  double worst = 0.0;
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (space.at(s).kind != SubsystemKind::Fock) continue;
    const int dloc = space.at(s).dim;
    const int pre = space.dim_before(s);
    const int post = space.dim_after(s);
    // population of |d-1><d-1| on subsystem s
    double pop = 0.0;
    for (int a = 0; a < pre; ++a)
      for (int b = 0; b < post; ++b) {
        int idx = (a * dloc + (dloc - 1)) * post + b;
        pop += mat(idx, idx).real();
      }
    worst = std::max(worst, pop);
  }
  return worst;
}

DensityMatrix vacuum_state(const SpaceSignature& space) {
  Matrix m = Matrix::Zero(space.total_dim(), space.total_dim());
  m(0, 0) = 1.0;
  return {space, std::move(m)};
}

DensityMatrix product_state(const SpaceSignature& space, const std::vector<Matrix>& locals) {
  if (locals.size() != space.size())
    throw SpaceError("product_state needs one local matrix per subsystem");
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (locals[s].rows() != space.at(s).dim || locals[s].cols() != space.at(s).dim)
      throw SpaceError("local state dimension mismatch on subsystem '" +
                       space.at(s).label + "'");
    m = kron(m, locals[s]);
  }
  return {space, std::move(m)};
}

DensityMatrix fock_state(const SpaceSignature& space, const std::vector<int>& occupations) {
  std::vector<Matrix> locals;
  std::size_t next = 0;
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto& sub = space.at(s);
    Matrix loc = Matrix::Zero(sub.dim, sub.dim);
    if (sub.kind == SubsystemKind::Fock) {
      if (next >= occupations.size())
        throw SpaceError("fock_state: not enough occupation numbers");
      int n = occupations[next++];
      if (n < 0 || n >= sub.dim)
        throw SpaceError("fock_state: occupation out of range for subsystem '" +
                         sub.label + "'");
      loc(n, n) = 1.0;
    } else {
      loc(0, 0) = 1.0;
    }
    locals.push_back(std::move(loc));
  }
  if (next != occupations.size())
    throw SpaceError("fock_state: too many occupation numbers");
  return product_state(space, locals);
}

DensityMatrix coherent_product_state(const SpaceSignature& space,
                                     const std::vector<Complex>& alphas) {
  std::vector<Matrix> locals;
  std::size_t next = 0;
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto& sub = space.at(s);
    if (sub.kind == SubsystemKind::Fock) {
      if (next >= alphas.size())
        throw SpaceError("coherent_product_state: not enough amplitudes");
      Complex alpha = alphas[next++];
      Vector psi(sub.dim);
      Complex amp{1.0, 0.0};
      psi(0) = amp;
      for (int n = 1; n < sub.dim; ++n) {
        amp *= alpha / std::sqrt(double(n));
        psi(n) = amp;
      }
      psi /= psi.norm();
      locals.push_back(psi * psi.adjoint());
    } else {
      Matrix loc = Matrix::Zero(2, 2);
      loc(0, 0) = 1.0;
      locals.push_back(std::move(loc));
    }
  }
  if (next != alphas.size())
    throw SpaceError("coherent_product_state: too many amplitudes");
  return product_state(space, locals);
}

DensityMatrix bloch_product_state(const SpaceSignature& space,
                                  const std::vector<std::array<double, 3>>& bloch) {
  std::vector<Matrix> locals;
  std::size_t next = 0;
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto& sub = space.at(s);
    if (sub.kind == SubsystemKind::Qubit) {
      if (next >= bloch.size())
        throw SpaceError("bloch_product_state: not enough Bloch vectors");
      auto [bx, by, bz] = bloch[next++];
      if (bx * bx + by * by + bz * bz > 1.0 + 1e-12)
        throw SpaceError("bloch_product_state: |r| > 1");
      Matrix loc(2, 2);
      loc(0, 0) = 0.5 * (1.0 + bz);
      loc(1, 1) = 0.5 * (1.0 - bz);
      loc(0, 1) = 0.5 * Complex(bx, -by);
      loc(1, 0) = 0.5 * Complex(bx, by);
      locals.push_back(std::move(loc));
    } else {
      Matrix loc = Matrix::Zero(sub.dim, sub.dim);
      loc(0, 0) = 1.0;
      locals.push_back(std::move(loc));
    }
  }
  if (next != bloch.size())
    throw SpaceError("bloch_product_state: too many Bloch vectors");
  return product_state(space, locals);
}

DensityMatrix thermal_product_state(const SpaceSignature& space, double nbar) {
  if (!(nbar >= 0.0))
    throw SpaceError("thermal_product_state: nbar must be >= 0");
  const double r = nbar / (1.0 + nbar);
  std::vector<Matrix> locals;
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto& sub = space.at(s);
    Matrix loc = Matrix::Zero(sub.dim, sub.dim);
    if (sub.kind == SubsystemKind::Fock) {
      double w = 1.0, total = 0.0;
      for (int n = 0; n < sub.dim; ++n, w *= r) {
        loc(n, n) = w;
        total += w;
      }
      loc /= total;
    } else {
      loc(0, 0) = 1.0;
    }
    locals.push_back(std::move(loc));
  }
  return product_state(space, locals);
}

Complex expectation(const DensityMatrix& rho, const OperatorMatrix& m) {
  require_same_space(rho.space, m.space, "expectation");
  return (m.mat * rho.mat).trace();
}

}  // namespace fbsim
