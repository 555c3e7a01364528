#include "fbsim/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace fbsim {

namespace {
constexpr Complex kI{0.0, 1.0};
const double kSqrtPi = std::sqrt(M_PI);

struct ChannelEigen {
  Eigen::SelfAdjointEigenSolver<Matrix> x_eig;
  Eigen::SelfAdjointEigenSolver<Matrix> y_eig;
  double center = 0.0;  // midpoint of the X spectrum
};

ChannelEigen diagonalize(const FeedbackChannel& ch) {
  ChannelEigen ce{Eigen::SelfAdjointEigenSolver<Matrix>(ch.X.mat),
                  Eigen::SelfAdjointEigenSolver<Matrix>(ch.Y.mat), 0.0};
  const auto& ev = ce.x_eig.eigenvalues();
  ce.center = 0.5 * (ev.minCoeff() + ev.maxCoeff());
  return ce;
}

/// One quadrature pass at n nodes. Works in the X eigenbasis; the
/// exp(+t^2) reweighting of Gauss-Hermite is folded into the Gaussian
/// Kraus factors analytically (exponent u_i t - u_i^2/2 per factor), so
/// nothing overflows even at large node counts. Node contributions are
/// accumulated with Kahan compensation to keep the sum order-independent.
Matrix averaged_map(const FeedbackChannel& ch, const ChannelEigen& ce,
                    const Matrix& rho, double dt, int n) {
  const int d = static_cast<int>(rho.rows());
  const double s = 1.0 / std::sqrt(2.0 * ch.meas_rate * dt);
  const double norm2 = std::sqrt(2.0 * ch.meas_rate * dt / M_PI);  // N^2

  std::vector<double> nodes, weights;
  gauss_hermite(n, nodes, weights);

  const Matrix& vx = ce.x_eig.eigenvectors();
  Matrix rho_x = vx.adjoint() * rho * vx;

  Eigen::VectorXd u(d);
  for (int i = 0; i < d; ++i)
    u(i) = (ce.x_eig.eigenvalues()(i) - ce.center) / s;

  const Matrix& vy = ce.y_eig.eigenvectors();
  const auto& th = ce.y_eig.eigenvalues();

  Matrix sum = Matrix::Zero(d, d);
  Matrix comp = Matrix::Zero(d, d);  // Kahan compensation
  Eigen::VectorXd damp(d);
  Vector phase(d);
  for (int k = 0; k < n; ++k) {
    const double t = nodes[k];
    const double xm = ce.center + s * t;
    for (int i = 0; i < d; ++i) damp(i) = norm2 * std::exp(u(i) * t - 0.5 * u(i) * u(i));
    // A_k = D rho_x D (in X basis), back to computational basis
    Matrix a = (damp * damp.transpose()).cast<Complex>().cwiseProduct(rho_x);
    Matrix b = vx * a * vx.adjoint();
    // conditional unitary in the Y eigenbasis
    for (int j = 0; j < d; ++j) phase(j) = std::exp(-kI * (ch.gain * xm * th(j) * dt));
    Matrix by = vy.adjoint() * b * vy;
    by = phase.asDiagonal() * by;
    by = by * phase.conjugate().asDiagonal();
    Matrix c = vy * by * vy.adjoint();

    Matrix term = (s * weights[k]) * c - comp;
    Matrix next = sum + term;
    comp = (next - sum) - term;
    sum = std::move(next);
  }
  return sum;
}

}  // namespace

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(k / 2.0);
    j(k - 1, k) = b;
    j(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()(k);
    double v0 = es.eigenvectors()(0, k);
    weights[k] = kSqrtPi * v0 * v0;
  }
}

DensityMatrix discrete_map_oracle(const FeedbackChannel& ch, const DensityMatrix& rho,
                                  double dt, const QuadratureOptions& opts) {
  ch.validate();
  require_same_space(ch.space(), rho.space, "discrete_map_oracle");
  if (!(dt > 0.0)) throw std::invalid_argument("discrete_map_oracle: dt must be > 0");
  if (ch.meas_rate == 0.0) return rho;  // no measurement, no feedback

  ChannelEigen ce = diagonalize(ch);
  Matrix prev = averaged_map(ch, ce, rho.mat, dt, opts.min_nodes);
  for (int n = 2 * opts.min_nodes; n <= opts.max_nodes; n *= 2) {
    Matrix cur = averaged_map(ch, ce, rho.mat, dt, n);
    if ((cur - prev).norm() <= opts.tol) return {rho.space, std::move(cur)};
    prev = std::move(cur);
  }
  throw NumericError(
      "discrete_map_oracle: quadrature did not stabilize below tol " +
      std::to_string(opts.tol) + " at " + std::to_string(opts.max_nodes) + " nodes");
}

PovmStats povm_outcome_stats(const FeedbackChannel& ch, const DensityMatrix& rho,
                             double dt, const QuadratureOptions& opts) {
  ch.validate();
  require_same_space(ch.space(), rho.space, "povm_outcome_stats");
  if (!(ch.meas_rate > 0.0))
    throw std::invalid_argument("povm_outcome_stats: needs meas_rate > 0");

  ChannelEigen ce = diagonalize(ch);
  const int d = rho.dim();
  const double s = 1.0 / std::sqrt(2.0 * ch.meas_rate * dt);
  const double norm2 = std::sqrt(2.0 * ch.meas_rate * dt / M_PI);

  const Matrix& vx = ce.x_eig.eigenvectors();
  Eigen::VectorXd pops = (vx.adjoint() * rho.mat * vx).diagonal().real();
  Eigen::VectorXd u(d);
  for (int i = 0; i < d; ++i)
    u(i) = (ce.x_eig.eigenvalues()(i) - ce.center) / s;

  auto moments = [&](int n) {
    std::vector<double> nodes, weights;
    gauss_hermite(n, nodes, weights);
    std::array<double, 3> m{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const double t = nodes[k];
      const double xm = ce.center + s * t;
      double p = 0.0;
      for (int i = 0; i < d; ++i)
        p += pops(i) * norm2 * std::exp(2.0 * u(i) * t - u(i) * u(i));
      const double w = s * weights[k] * p;
      m[0] += w;
      m[1] += w * xm;
      m[2] += w * xm * xm;
    }
    return m;
  };

  std::array<double, 3> prev = moments(opts.min_nodes);
  for (int n = 2 * opts.min_nodes; n <= opts.max_nodes; n *= 2) {
    std::array<double, 3> cur = moments(n);
    double diff = std::abs(cur[0] - prev[0]) + std::abs(cur[1] - prev[1]) +
                  std::abs(cur[2] - prev[2]);
    if (diff <= opts.tol) {
      PovmStats st;
      st.total_probability = cur[0];
      st.mean = cur[1] / cur[0];
      st.variance = cur[2] / cur[0] - st.mean * st.mean;
      return st;
    }
    prev = cur;
  }
  throw NumericError("povm_outcome_stats: quadrature did not stabilize");
}

Matrix extrapolated_generator(const FeedbackChannel& ch, const DensityMatrix& rho,
                              double dt, const QuadratureOptions& opts) {
  auto g = [&](double step) {
    Matrix mapped = discrete_map_oracle(ch, rho, step, opts).mat;
    return Matrix((mapped - rho.mat) / step);
  };
  Matrix g1 = g(dt);
  Matrix g2 = g(dt / 2.0);
  Matrix g3 = g(dt / 4.0);
  Matrix r1 = 2.0 * g2 - g1;
  Matrix r2 = 2.0 * g3 - g2;
  return (4.0 * r2 - r1) / 3.0;
}

}  // namespace fbsim
