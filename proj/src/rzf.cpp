#include "rsbf/rzf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsbf {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

template <typename Mat>
auto spd_solve(const Mat& A, const Mat& B) {
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) throw std::runtime_error("Cholesky factorization failed");
  return Mat(llt.solve(B));
}

}  // namespace

double regularizer(double transmit_power, int num_users) {
  require_positive(transmit_power, "transmit power");
  if (num_users < 1) throw std::invalid_argument("user count must be >= 1");
  return transmit_power / num_users;
}

Eigen::MatrixXcd solve_exact_complex(const Eigen::MatrixXcd& H, double gamma, double sigma2,
                                     double beta) {
  require_positive(gamma, "gamma");
  require_positive(sigma2, "sigma2");
  require_positive(beta, "beta");
  if (!H.allFinite()) throw std::invalid_argument("solve_exact_complex: non-finite channel");

  Eigen::MatrixXcd gram = (gamma / sigma2) * (H * H.adjoint());
  gram.diagonal().array() += 1.0;
  // W* = beta H^H G^{-1} = beta (G^{-1} H)^H since G is Hermitian.
  const Eigen::MatrixXcd x = spd_solve<Eigen::MatrixXcd>(gram, H);
  return beta * x.adjoint();
}

Eigen::MatrixXcd solve_exact_complex_primal(const Eigen::MatrixXcd& H, double gamma,
                                            double sigma2, double beta) {
  require_positive(gamma, "gamma");
  require_positive(sigma2, "sigma2");
  require_positive(beta, "beta");
  if (!H.allFinite()) throw std::invalid_argument("solve_exact_complex_primal: non-finite channel");

  Eigen::MatrixXcd gram = (gamma / sigma2) * (H.adjoint() * H);
  gram.diagonal().array() += 1.0;
  return beta * spd_solve<Eigen::MatrixXcd>(gram, H.adjoint());
}

Eigen::MatrixXd solve_exact_real(const RealEmbedding& emb) {
  Eigen::MatrixXd gram = emb.Q * emb.Q.transpose();
  gram.diagonal().array() += emb.lambda;
  return emb.Q.transpose() * spd_solve<Eigen::MatrixXd>(gram, emb.Lambda);
}

Eigen::MatrixXd solve_exact_primal(const RealEmbedding& emb, Eigen::Index max_dim) {
  if (emb.Q.cols() > max_dim)
    throw std::invalid_argument("solve_exact_primal: 2M = " + std::to_string(emb.Q.cols()) +
                                " exceeds the oracle size cap " + std::to_string(max_dim));
  Eigen::MatrixXd gram = emb.Q.transpose() * emb.Q;
  gram.diagonal().array() += emb.lambda;
  const Eigen::MatrixXd rhs = emb.Q.transpose() * emb.Lambda;
  return spd_solve<Eigen::MatrixXd>(gram, rhs);
}

double power_scale(const Eigen::MatrixXcd& W, double transmit_power) {
  require_positive(transmit_power, "transmit power");
  const double norm = W.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("power_normalize: zero beamformer");
  return std::sqrt(transmit_power) / norm;
}

Eigen::MatrixXcd power_normalize(const Eigen::MatrixXcd& W, double transmit_power) {
  return power_scale(W, transmit_power) * W;
}

}  // namespace rsbf
