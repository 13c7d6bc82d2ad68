#pragma once

// Reference computations used only by tests. Each one takes a different
// algebraic route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace rsbf::oracle {

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {n(gen), n(gen)};
  return m;
}

inline Eigen::MatrixXd random_real(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(gen);
  return m;
}

inline double rel_diff(const auto& a, const auto& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

// tau_i = Q_i^T (Q Q^T)^+ Q_i via a complete orthogonal decomposition pseudoinverse.
inline Eigen::VectorXd leverage_scores_definitional(const Eigen::MatrixXd& Q) {
  const Eigen::MatrixXd gram = Q * Q.transpose();
  const Eigen::MatrixXd pinv = gram.completeOrthogonalDecomposition().pseudoInverse();
  return (Q.transpose() * pinv * Q).diagonal();
}

// tau_i^lambda = Q_i^T (Q Q^T + lambda I)^{-1} Q_i via an LU solve.
inline Eigen::VectorXd ridge_scores_definitional(const Eigen::MatrixXd& Q, double lambda) {
  Eigen::MatrixXd gram = Q * Q.transpose();
  gram.diagonal().array() += lambda;
  const Eigen::MatrixXd x = gram.partialPivLu().solve(Q);
  return (Q.array() * x.array()).colwise().sum().transpose();
}

// phi_kj through the real expansion
//   (Re g^T Re w - Im g^T Im w)^2 + (Im g^T Re w + Re g^T Im w)^2
// with g the k-th row of H (the conjugate of h_k), so that g^T w = h_k^H w.
inline double phi_real_expansion(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, Eigen::Index k,
                                 Eigen::Index j) {
  const Eigen::VectorXd re_g = H.row(k).real().transpose();
  const Eigen::VectorXd im_g = H.row(k).imag().transpose();
  const Eigen::VectorXd re_w = W.col(j).real();
  const Eigen::VectorXd im_w = W.col(j).imag();
  const double a = re_g.dot(re_w) - im_g.dot(im_w);
  const double b = im_g.dot(re_w) + re_g.dot(im_w);
  return a * a + b * b;
}

// Two-sided one-sample Kolmogorov-Smirnov p-value against N(0, sd^2)
// (asymptotic Kolmogorov distribution).
inline double ks_normal_pvalue(std::vector<double> x, double sd) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-x[i] / (sd * std::sqrt(2.0)));
    d = std::max({d, cdf - i / n, (i + 1) / n - cdf});
  }
  const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace rsbf::oracle
