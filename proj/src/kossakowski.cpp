#include "fbsim/kossakowski.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace fbsim {

namespace {
constexpr Complex kI{0.0, 1.0};

Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}
}  // namespace

DissipativePart::DissipativePart(const SpaceSignature& space) : space_(space) {
  k_.resize(0, 0);
  h_corr_ = Matrix::Zero(space.total_dim(), space.total_dim());
}

int DissipativePart::project_or_extend(const Matrix& traceless) {
  // Returns index of a new basis vector, or -1 if `traceless` lies in the
  // current span (coefficients are recomputed by the caller either way).
  Matrix r = traceless;
  const double norm0 = r.norm();
  if (norm0 <= 1e-14) return -1;
  for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize once
    for (const auto& e : basis_) r -= hs_inner(e, r) * e;
  if (r.norm() <= 1e-12 * norm0) return -1;
  basis_.push_back(r / r.norm());
  Matrix grown = Matrix::Zero(basis_.size(), basis_.size());
  if (k_.rows() > 0) grown.topLeftCorner(k_.rows(), k_.cols()) = k_;
  k_ = std::move(grown);
  return static_cast<int>(basis_.size()) - 1;
}

void DissipativePart::add(double weight, const Matrix& jump) {
  if (weight == 0.0) return;
  if (jump.rows() != space_.total_dim() || jump.cols() != space_.total_dim())
    throw SpaceError("DissipativePart: jump dimension mismatch");

  const int d = space_.total_dim();
  const Complex z = jump.trace() / double(d);
  Matrix ct = jump - z * Matrix::Identity(d, d);

  // D[c_t + z] = D[c_t] - i [H'', .] with H'' = (z c_t^dag - conj(z) c_t)/(2i)
  if (std::abs(z) > 0.0)
    h_corr_ += weight * ((z * ct.adjoint() - std::conj(z) * ct) / (2.0 * kI));

  if (ct.norm() <= 1e-14) return;
  project_or_extend(ct);

  Vector v(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) v(i) = hs_inner(basis_[i], ct);
  k_ += weight * (v * v.adjoint());
}

void DissipativePart::add(const LindbladSpec& spec) {
  require_same_space(space_, spec.space(), "DissipativePart::add");
  for (const auto& diss : spec.dissipators()) add(diss.rate, diss.jump.mat);
}

void DissipativePart::subtract(const LindbladSpec& spec) {
  require_same_space(space_, spec.space(), "DissipativePart::subtract");
  for (const auto& diss : spec.dissipators()) add(-diss.rate, diss.jump.mat);
}

double DissipativePart::min_eigenvalue() const {
  if (k_.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k_ + k_.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DissipativePart::max_abs_eigenvalue() const {
  if (k_.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k_ + k_.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool DissipativePart::is_completely_positive(double tol) const {
  double scale = std::max(1.0, max_abs_eigenvalue());
  return min_eigenvalue() >= -tol * scale;
}

double DissipativePart::directional_rate(const Matrix& x) const {
  const int d = space_.total_dim();
  Matrix xt = x - (x.trace() / double(d)) * Matrix::Identity(d, d);
  const double n2 = xt.squaredNorm();
  if (n2 <= 1e-28) return 0.0;
  if (basis_.empty()) return 0.0;
  Vector p(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) p(i) = hs_inner(basis_[i], xt);
  return (p.adjoint() * k_ * p).real()(0) / (n2 * n2);
}

std::vector<Dissipator> DissipativePart::decompose(double tol,
                                                   double drop_tol) const {
  const int m = static_cast<int>(basis_.size());
  std::vector<Dissipator> out;
  if (m == 0) return out;

  const double scale = std::max(1.0, max_abs_eigenvalue());
  const double link_tol = 1e-12 * scale;

  // connected components of the K sparsity pattern
  std::vector<int> comp(m, -1);
  int n_comp = 0;
  for (int seed = 0; seed < m; ++seed) {
    if (comp[seed] >= 0) continue;
    std::vector<int> stack{seed};
    comp[seed] = n_comp;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < m; ++j)
        if (comp[j] < 0 && std::abs(k_(i, j)) > link_tol) {
          comp[j] = n_comp;
          stack.push_back(j);
        }
    }
    ++n_comp;
  }

  for (int c = 0; c < n_comp; ++c) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (comp[i] == c) idx.push_back(i);
    const int mc = static_cast<int>(idx.size());
    Matrix kc(mc, mc);
    for (int i = 0; i < mc; ++i)
      for (int j = 0; j < mc; ++j) kc(i, j) = k_(idx[i], idx[j]);

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (kc + kc.adjoint()));
    for (int e = 0; e < mc; ++e) {
      const double rate = es.eigenvalues()(e);
      if (rate < -tol * scale)
        throw NotCompletelyPositive(
            "dissipative part has Kossakowski eigenvalue " + std::to_string(rate) +
                " < 0; refusing to emit an unphysical generator",
            rate);
      if (rate <= drop_tol * scale) continue;
      Matrix jump = Matrix::Zero(space_.total_dim(), space_.total_dim());
      for (int i = 0; i < mc; ++i) jump += es.eigenvectors()(i, e) * basis_[idx[i]];
      out.push_back({rate, OperatorMatrix(space_, std::move(jump))});
    }
  }
  return out;
}

double DissipativePart::distance(const DissipativePart& other) const {
  require_same_space(space_, other.space_, "DissipativePart::distance");
  // Assemble both K matrices over the joint span.
  std::vector<Matrix> joint = basis_;
  auto extend = [&joint](const Matrix& v) {
    Matrix r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : joint) r -= hs_inner(e, r) * e;
    if (r.norm() > 1e-12) joint.push_back(r / r.norm());
  };
  for (const auto& e : other.basis_) extend(e);

  const int m = static_cast<int>(joint.size());
  auto lift = [&](const DissipativePart& part) {
    Matrix big = Matrix::Zero(m, m);
    if (part.basis_.empty()) return big;
    Matrix overlap(m, part.basis_.size());
    for (int i = 0; i < m; ++i)
      for (std::size_t j = 0; j < part.basis_.size(); ++j)
        overlap(i, j) = hs_inner(joint[i], part.basis_[j]);
    big = overlap * part.k_ * overlap.adjoint();
    return big;
  };

  double dk = (lift(*this) - lift(other)).norm();
  double dh = (h_corr_ - other.h_corr_).norm();
  return std::sqrt(dk * dk + dh * dh);
}

}  // namespace fbsim
