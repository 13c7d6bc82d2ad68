#include "rsbf/realify.hpp"

#include <stdexcept>

namespace rsbf {

RealEmbedding embed(const Eigen::MatrixXcd& H, double lambda, double beta) {
  if (!(lambda > 0.0)) throw std::invalid_argument("embed: lambda must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("embed: beta must be positive");

  const Eigen::Index k = H.rows();
  const Eigen::Index m = H.cols();
  RealEmbedding emb;
  emb.lambda = lambda;
  emb.beta = beta;

  emb.Q.resize(2 * k, 2 * m);
  emb.Q.topLeftCorner(k, m) = H.real();
  emb.Q.topRightCorner(k, m) = -H.imag();
  emb.Q.bottomLeftCorner(k, m) = H.imag();
  emb.Q.bottomRightCorner(k, m) = H.real();

  emb.Lambda = Eigen::MatrixXd::Zero(2 * k, k);
  emb.Lambda.topRows(k).diagonal().setConstant(lambda * beta);
  return emb;
}

Eigen::MatrixXd stack(const Eigen::MatrixXcd& W) {
  Eigen::MatrixXd out(2 * W.rows(), W.cols());
  out.topRows(W.rows()) = W.real();
  out.bottomRows(W.rows()) = W.imag();
  return out;
}

Eigen::MatrixXcd lift(const Eigen::MatrixXd& Mreal) {
  if (Mreal.rows() % 2 != 0) throw std::invalid_argument("lift: row count must be even");
  const Eigen::Index m = Mreal.rows() / 2;
  Eigen::MatrixXcd W(m, Mreal.cols());
  W.real() = Mreal.topRows(m);
  W.imag() = Mreal.bottomRows(m);
  return W;
}

}  // namespace rsbf
