#pragma once

#include <Eigen/Dense>

#include "rsbf/realify.hpp"

namespace rsbf {

// Exact regularized zero-forcing solvers. They serve as the reference every
// sketched solution is measured against.

// gamma = P / K for equally strong channels.
double regularizer(double transmit_power, int num_users);

// W* = beta * H^H (I_K + (gamma/sigma2) H H^H)^{-1}. Cost O(M K^2 + K^3).
Eigen::MatrixXcd solve_exact_complex(const Eigen::MatrixXcd& H, double gamma, double sigma2,
                                     double beta);

// W* = beta * (I_M + (gamma/sigma2) H^H H)^{-1} H^H. Cost O(M^3); used as a check.
Eigen::MatrixXcd solve_exact_complex_primal(const Eigen::MatrixXcd& H, double gamma,
                                            double sigma2, double beta);

// M* = Q^T (Q Q^T + lambda I_2K)^{-1} Lambda.
Eigen::MatrixXd solve_exact_real(const RealEmbedding& emb);

inline constexpr Eigen::Index kPrimalSizeCap = 2048;

// M* = (Q^T Q + lambda I_2M)^{-1} Q^T Lambda. Rejects 2M > max_dim.
Eigen::MatrixXd solve_exact_primal(const RealEmbedding& emb, Eigen::Index max_dim = kPrimalSizeCap);

// Scales W so that ||W||_F^2 = P.
Eigen::MatrixXcd power_normalize(const Eigen::MatrixXcd& W, double transmit_power);

// sqrt(P) / ||W||_F, the factor power_normalize applies.
double power_scale(const Eigen::MatrixXcd& W, double transmit_power);

}  // namespace rsbf
