#include "fbsim/superop.hpp"

namespace fbsim {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix sandwich_superop(const Matrix& a, const Matrix& b) {
  return kron(b.transpose(), a);
}

Matrix hamiltonian_superop(const Matrix& h) {
  const int d = static_cast<int>(h.rows());
  Matrix id = Matrix::Identity(d, d);
  return -kI * (sandwich_superop(h, id) - sandwich_superop(id, h));
}

Matrix dissipator_superop(double rate, const Matrix& c) {
  const int d = static_cast<int>(c.rows());
  Matrix id = Matrix::Identity(d, d);
  Matrix cdc = c.adjoint() * c;
  return rate * (sandwich_superop(c, c.adjoint()) -
                 0.5 * sandwich_superop(cdc, id) -
                 0.5 * sandwich_superop(id, cdc));
}

Matrix superoperator_matrix(const LindbladSpec& spec) {
  const int d = spec.space().total_dim();
  if (d > 100)
    throw std::invalid_argument(
        "superoperator_matrix: total dim " + std::to_string(d) +
        " exceeds the dense materialization guard (100)");
  Matrix lop = hamiltonian_superop(spec.hamiltonian().mat);
  for (const auto& diss : spec.dissipators())
    lop += dissipator_superop(diss.rate, diss.jump.mat);
  return lop;
}

}  // namespace fbsim
