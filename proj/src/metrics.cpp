#include "rsbf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rsbf {

namespace {

void check_indices(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, Eigen::Index k, Eigen::Index j) {
  if (H.cols() != W.rows()) throw std::invalid_argument("phi: H and W do not conform");
  if (k < 0 || k >= H.rows() || j < 0 || j >= W.cols()) throw std::out_of_range("phi: index out of range");
}

// sum_{j != k} phi_kj for all k, plus phi_kk.
void interference(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, Eigen::VectorXd& signal,
                  Eigen::VectorXd& leak) {
  const Eigen::MatrixXd gains = (H * W).cwiseAbs2();
  signal = gains.diagonal();
  leak = gains.rowwise().sum() - signal;
}

}  // namespace

double phi(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, Eigen::Index k, Eigen::Index j) {
  check_indices(H, W, k, j);
  return std::norm((H.row(k) * W.col(j)).value());
}

double sinr(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, double sigma2, Eigen::Index k) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sinr: sigma2 must be positive");
  check_indices(H, W, k, k);
  double leak = 0.0;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    if (j != k) leak += phi(H, W, k, j);
  }
  return phi(H, W, k, k) / (leak + sigma2);
}

RateReport sum_rate(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sum_rate: sigma2 must be positive");
  if (H.cols() != W.rows() || H.rows() != W.cols()) throw std::invalid_argument("sum_rate: H and W do not conform");
  Eigen::VectorXd signal, leak;
  interference(H, W, signal, leak);

  RateReport out;
  out.sinr = (signal.array() / (leak.array() + sigma2)).matrix();
  out.rate = out.sinr.array().log1p().matrix();
  out.sum_rate = out.rate.sum();
  out.sum_rate_bits = out.sum_rate / std::numbers::ln2;
  return out;
}

double solution_error(const Eigen::MatrixXcd& What, const Eigen::MatrixXcd& Wstar) {
  if (What.rows() != Wstar.rows() || What.cols() != Wstar.cols())
    throw std::invalid_argument("solution_error: shape mismatch");
  return (What - Wstar).norm();
}

double solution_error(const Eigen::MatrixXd& Mhat, const Eigen::MatrixXd& Mstar) {
  if (Mhat.rows() != Mstar.rows() || Mhat.cols() != Mstar.cols())
    throw std::invalid_argument("solution_error: shape mismatch");
  return (Mhat - Mstar).norm();
}

Eigen::Index xi_index(const Eigen::VectorXd& singular_values, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("xi_index: lambda must be positive");
  Eigen::Index xi = 0;
  while (xi < singular_values.size() && singular_values(xi) * singular_values(xi) >= lambda) ++xi;
  return xi;
}

double error_bound(double epsilon, int t, double wstar_norm) {
  return std::pow(epsilon, t) * wstar_norm;
}

double eta_ridge(const SpectralProfile& profile, const Eigen::MatrixXd& Lambda, double lambda) {
  const Eigen::Index xi = xi_index(profile.singular_values, lambda);
  const Eigen::Index rest = profile.left_vectors.cols() - xi;
  if (rest == 0) return 0.0;
  const double tail = (profile.left_vectors.rightCols(rest).transpose() * Lambda).norm();
  return tail / std::sqrt(2.0 * lambda);
}

double eta_ridge_literal(const SpectralProfile& profile, const Eigen::MatrixXd& Lambda, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("eta_ridge_literal: lambda must be positive");
  // U_{2K,perp} keeps the bottom 2K - 2K columns of U.
  const Eigen::Index rest = profile.left_vectors.cols() - profile.singular_values.size();
  if (rest <= 0) return 0.0;
  const Eigen::MatrixXd proj = profile.left_vectors.rightCols(rest).transpose() * Lambda;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj);
  return svd.singularValues()(0) / std::sqrt(2.0 * lambda);
}

double ridge_error_bound(double epsilon, int t, double wstar_norm, double lambda,
                  const Eigen::MatrixXd& Lambda, const SpectralProfile& profile) {
  const double eta = eta_ridge(profile, Lambda, lambda);
  // (1/(2 lambda)) ||U^T Lambda||^2 = eta^2
  return std::pow(epsilon, t) / std::numbers::sqrt2 * std::sqrt(wstar_norm * wstar_norm + eta * eta);
}

double constant_C(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Wstar, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("constant_C: sigma2 must be positive");
  Eigen::VectorXd signal, leak;
  interference(H, Wstar, signal, leak);
  const Eigen::ArrayXd denom = leak.array() + sigma2;
  const double a = denom.inverse().maxCoeff();
  const double b = (signal.array() / denom.square()).maxCoeff();
  return 2.0 * std::max(a, b);
}

double rate_perturbation_bound(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& What,
                          const Eigen::MatrixXcd& Wstar, double C) {
  const double diff = solution_error(What, Wstar);
  return C * H.squaredNorm() * (diff * diff + 2.0 * diff * Wstar.norm());
}

double rate_error_bound(int t, double epsilon, double C, const Eigen::MatrixXcd& H,
                       const Eigen::MatrixXcd& Wstar, double eta) {
  if (eta < 0.0) throw std::invalid_argument("rate_error_bound: eta must be nonnegative");
  const double base = Wstar.norm() + eta;
  return 3.0 * C * std::pow(epsilon, t) * H.squaredNorm() * base * base;
}

BoundReport bound_report(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Wstar, double sigma2,
                         const RealEmbedding& emb, const SpectralProfile& profile,
                         const SketchMatrix& S, int max_t) {
  BoundReport r;
  r.epsilon_effective = 2.0 * sketch_quality(profile, S);
  r.epsilon_ridge_effective = 4.0 * std::numbers::sqrt2 * ridge_sketch_quality(profile, S, emb.lambda);
  r.C = constant_C(H, Wstar, sigma2);
  r.xi = xi_index(profile.singular_values, emb.lambda);
  r.eta = eta_ridge(profile, emb.Lambda, emb.lambda);
  r.eta_literal = eta_ridge_literal(profile, emb.Lambda, emb.lambda);

  const double wnorm = Wstar.norm();
  for (int t = 0; t <= max_t; ++t) {
    r.error_rhs.push_back(error_bound(r.epsilon_effective, t, wnorm));
    r.ridge_error_rhs.push_back(ridge_error_bound(r.epsilon_ridge_effective, t, wnorm, emb.lambda, emb.Lambda, profile));
    r.rate_rhs.push_back(rate_error_bound(t, r.epsilon_effective, r.C, H, Wstar, 0.0));
    r.rate_ridge_rhs.push_back(rate_error_bound(t, r.epsilon_ridge_effective, r.C, H, Wstar, r.eta));
    r.rate_ridge_literal_rhs.push_back(
        rate_error_bound(t, r.epsilon_ridge_effective, r.C, H, Wstar, r.eta_literal));
  }
  return r;
}

}  // namespace rsbf
