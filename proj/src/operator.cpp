#include "fbsim/operator.hpp"

#include <cmath>

namespace fbsim {

namespace {
constexpr Complex kI{0.0, 1.0};
}

OperatorMatrix::OperatorMatrix(SpaceSignature sp, Matrix m)
    : space(std::move(sp)), mat(std::move(m)) {
  if (mat.rows() != mat.cols() || mat.rows() != space.total_dim())
    throw SpaceError("operator matrix dimension does not match its space");
}

double OperatorMatrix::hermiticity_defect() const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_hermitian() const {
  double scale = mat.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return hermiticity_defect() <= 1e-12 * scale;
}

Generator generator_from_name(const std::string& name) {
  if (name == "a" || name == "annihilate") return Generator::Annihilate;
  if (name == "adag" || name == "create") return Generator::Create;
  if (name == "x") return Generator::X;
  if (name == "y") return Generator::Y;
  if (name == "n" || name == "number") return Generator::Number;
  if (name == "sx") return Generator::PauliX;
  if (name == "sy") return Generator::PauliY;
  if (name == "sz") return Generator::PauliZ;
  if (name == "id" || name == "identity") return Generator::Identity;
  throw SpaceError("unknown generator name '" + name + "'");
}

std::string generator_name(Generator g) {
  switch (g) {
    case Generator::Annihilate: return "a";
    case Generator::Create: return "adag";
    case Generator::X: return "x";
    case Generator::Y: return "y";
    case Generator::Number: return "n";
    case Generator::PauliX: return "sx";
    case Generator::PauliY: return "sy";
    case Generator::PauliZ: return "sz";
    case Generator::Identity: return "id";
  }
  return "?";
}

namespace {

Matrix fock_annihilate(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

}  // namespace

Matrix local_generator(Generator g, SubsystemKind kind, int dim) {
  if (g == Generator::Identity) return Matrix::Identity(dim, dim);

  if (kind == SubsystemKind::Fock) {
    Matrix a = fock_annihilate(dim);
    switch (g) {
      case Generator::Annihilate: return a;
      case Generator::Create: return a.adjoint();
      case Generator::X: return 0.5 * (a + Matrix(a.adjoint()));
      case Generator::Y: return (a - Matrix(a.adjoint())) / (2.0 * kI);
      case Generator::Number: return Matrix(a.adjoint() * a);
      default:
        throw SpaceError("generator '" + generator_name(g) +
                         "' is not valid for a fock subsystem");
    }
  }

  // qubit
  Matrix m = Matrix::Zero(2, 2);
  switch (g) {
    case Generator::PauliX:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      return m;
    case Generator::PauliY:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      return m;
    case Generator::PauliZ:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      return m;
    default:
      throw SpaceError("generator '" + generator_name(g) +
                       "' is not valid for a qubit subsystem");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix embed(const SpaceSignature& space, std::size_t sub,
                     const Matrix& local) {
  if (sub >= space.size()) throw SpaceError("subsystem index out of range");
  const int dloc = space.at(sub).dim;
  if (local.rows() != dloc || local.cols() != dloc)
    throw SpaceError("local matrix does not match subsystem dimension");
  const int pre = space.dim_before(sub);
  const int post = space.dim_after(sub);
  Matrix m = kron(Matrix::Identity(pre, pre), kron(local, Matrix::Identity(post, post)));
  return {space, std::move(m)};
}

OperatorMatrix build_generator(const SpaceSignature& space,
                               const std::string& label, Generator g) {
  if (g == Generator::Identity) return identity_op(space);
  int idx = space.index_of(label);
  if (idx < 0) throw SpaceError("unknown subsystem label '" + label + "'");
  const Subsystem& s = space.at(static_cast<std::size_t>(idx));
  return embed(space, static_cast<std::size_t>(idx),
               local_generator(g, s.kind, s.dim));
}

OperatorMatrix build_generator(const SpaceSignature& space,
                               const std::string& label,
                               const std::string& generator_name) {
  return build_generator(space, label, generator_from_name(generator_name));
}

OperatorMatrix identity_op(const SpaceSignature& space) {
  return {space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

OperatorMatrix zero_op(const SpaceSignature& space) {
  return {space, Matrix::Zero(space.total_dim(), space.total_dim())};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space, b.space, "commutator");
  return {a.space, a.mat * b.mat - b.mat * a.mat};
}

OperatorMatrix anticommutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space, b.space, "anticommutator");
  return {a.space, a.mat * b.mat + b.mat * a.mat};
}

}  // namespace fbsim
