#pragma once

#include <Eigen/Dense>

namespace rsbf {

// Real form of the complex ridge problem
//   min_W ||H W - lambda*beta*I_K||_F^2 + lambda ||W||_F^2.
// Q = [[Re H, -Im H], [Im H, Re H]] (2K x 2M), Lambda = [lambda*beta*I_K; 0] (2K x K).
// Real variables are stacked [Re W; Im W].
struct RealEmbedding {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd Lambda;
  double lambda = 0.0;
  double beta = 0.0;

  Eigen::Index num_users() const { return Lambda.cols(); }
  Eigen::Index num_antennas() const { return Q.cols() / 2; }
};

// Throws std::invalid_argument unless lambda > 0 and beta > 0.
RealEmbedding embed(const Eigen::MatrixXcd& H, double lambda, double beta);

// [Re W; Im W]
Eigen::MatrixXd stack(const Eigen::MatrixXcd& W);

// Inverse of stack. Throws std::invalid_argument on an odd row count.
Eigen::MatrixXcd lift(const Eigen::MatrixXd& Mreal);

}  // namespace rsbf
