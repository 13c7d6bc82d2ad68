#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rsbf/realify.hpp"
#include "rsbf/sketch.hpp"

namespace rsbf {

// Rates are in nats; bits are derived for reporting only.
struct RateReport {
  Eigen::VectorXd sinr;
  Eigen::VectorXd rate;
  double sum_rate = 0.0;
  double sum_rate_bits = 0.0;
};

// |h_k^H w_j|^2, with H holding h_k^H as row k.
double phi(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, Eigen::Index k, Eigen::Index j);

// phi_kk / (sum_{j != k} phi_kj + sigma2)
double sinr(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, double sigma2, Eigen::Index k);

RateReport sum_rate(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, double sigma2);

// ||What - Wstar||_F. Throws std::invalid_argument on a shape mismatch.
double solution_error(const Eigen::MatrixXcd& What, const Eigen::MatrixXcd& Wstar);
double solution_error(const Eigen::MatrixXd& Mhat, const Eigen::MatrixXd& Mstar);

// Largest xi with sigma_xi^2 >= lambda (1-based count), so xi = 0 when
// lambda > sigma_1^2 and xi = 2K when lambda <= sigma_2K^2.
Eigen::Index xi_index(const Eigen::VectorXd& singular_values, double lambda);

// eps^t ||W*||_F
double error_bound(double epsilon, int t, double wstar_norm);

// (1/sqrt(2 lambda)) ||U_{xi,perp}^T Lambda||_F, the additive term of the
// ridge-leverage error bound.
double eta_ridge(const SpectralProfile& profile, const Eigen::MatrixXd& Lambda, double lambda);

// (1/sqrt(2 lambda)) ||U_{2K,perp}^T Lambda||_2 read literally: the complement
// of all 2K left vectors is empty, so this is 0.
double eta_ridge_literal(const SpectralProfile& profile, const Eigen::MatrixXd& Lambda, double lambda);

// (eps^t / sqrt 2) (||W*||_F^2 + (1/(2 lambda)) ||U_{xi,perp}^T Lambda||_F^2)^{1/2}
double ridge_error_bound(double epsilon, int t, double wstar_norm, double lambda,
                  const Eigen::MatrixXd& Lambda, const SpectralProfile& profile);

// 2 max_k max{ 1 / (I_k + sigma2), phi_kk / (I_k + sigma2)^2 } with
// I_k = sum_{j != k} phi_kj(W*).
double constant_C(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Wstar, double sigma2);

// C ||H||_F^2 (||What - W*||_F^2 + 2 ||What - W*||_F ||W*||_F)
double rate_perturbation_bound(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& What,
                          const Eigen::MatrixXcd& Wstar, double C);

// 3 C eps^t ||H||_F^2 (||W*||_F + eta)^2
double rate_error_bound(int t, double epsilon, double C, const Eigen::MatrixXcd& H,
                       const Eigen::MatrixXcd& Wstar, double eta);

struct BoundReport {
  double epsilon_effective = 0.0;        // 2 * sketch_quality
  double epsilon_ridge_effective = 0.0;  // 4 sqrt(2) * ridge_sketch_quality
  std::vector<double> error_rhs;          // index t = 0..T
  std::vector<double> ridge_error_rhs;
  std::vector<double> rate_rhs;               // eta = 0
  std::vector<double> rate_ridge_rhs;         // eta = eta_ridge, ridge epsilon
  std::vector<double> rate_ridge_literal_rhs; // eta = eta_ridge_literal, ridge epsilon
  double C = 0.0;
  Eigen::Index xi = 0;
  double eta = 0.0;
  double eta_literal = 0.0;
};

// Evaluates every bound for t = 0..max_t from the measured sketch qualities.
// Wstar must solve the system whose right-hand side is emb.Lambda.
BoundReport bound_report(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Wstar, double sigma2,
                         const RealEmbedding& emb, const SpectralProfile& profile,
                         const SketchMatrix& S, int max_t);

}  // namespace rsbf
