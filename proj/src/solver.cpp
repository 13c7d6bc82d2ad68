#include "rsbf/solver.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rsbf/realify.hpp"

namespace rsbf {

Preconditioner Preconditioner::factorize(const Eigen::MatrixXd& Q, const SketchMatrix& S, double lambda) {
  if (S.rows != Q.cols()) throw std::invalid_argument("factorize: sketch rows must equal Q columns");
  return from_sketch(S.right_multiply(Q), lambda);
}

Preconditioner Preconditioner::from_sketch(const Eigen::MatrixXd& QS, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("factorize: lambda must be positive");
  if (!QS.allFinite()) throw std::runtime_error("factorize: non-finite sketch QS");

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(QS.rows(), QS.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(QS);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.compute(gram.selfadjointView<Eigen::Lower>());
  if (eig.info() != Eigen::Success) throw std::runtime_error("factorize: eigendecomposition failed");

  Preconditioner p;
  p.basis_ = eig.eigenvectors();
  // Round-off can push null-space eigenvalues slightly negative.
  p.spectrum_ = eig.eigenvalues().cwiseMax(0.0);
  p.lambda_ = lambda;
  return p;
}

Eigen::MatrixXd Preconditioner::apply_inverse(const Eigen::MatrixXd& B) const {
  if (B.rows() != basis_.rows()) throw std::invalid_argument("apply_inverse: shape mismatch");
  const Eigen::VectorXd inv = (spectrum_.array() + lambda_).inverse().matrix();
  return basis_ * (inv.asDiagonal() * (basis_.transpose() * B));
}

Eigen::MatrixXd Preconditioner::apply(const Eigen::MatrixXd& X) const {
  if (X.rows() != basis_.rows()) throw std::invalid_argument("apply: shape mismatch");
  const Eigen::VectorXd shifted = (spectrum_.array() + lambda_).matrix();
  return basis_ * (shifted.asDiagonal() * (basis_.transpose() * X));
}

Eigen::MatrixXcd SolveTrace::beamformer() const { return lift(solution); }

SolveTrace iterate(const RealEmbedding& emb, const SketchMatrix& S, int iterations,
                   const IterateOptions& options) {
  if (S.rows != emb.Q.cols()) throw std::invalid_argument("iterate: sketch does not conform to Q");
  return iterate(emb, Preconditioner::factorize(emb.Q, S, emb.lambda), iterations, options);
}

SolveTrace iterate(const RealEmbedding& emb, const Preconditioner& precond, int iterations,
                   const IterateOptions& options) {
  if (iterations < 1) throw std::invalid_argument("iterate: iteration count must be >= 1");
  if (precond.basis().rows() != emb.Q.rows())
    throw std::invalid_argument("iterate: preconditioner does not conform to Q");
  if (options.exact && (options.exact->rows() != emb.Q.cols() || options.exact->cols() != emb.Lambda.cols()))
    throw std::invalid_argument("iterate: reference solution has the wrong shape");

  const Eigen::MatrixXd& Q = emb.Q;
  Eigen::MatrixXd residual = emb.Lambda;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(Q.rows(), emb.Lambda.cols());
  Eigen::MatrixXd step = Eigen::MatrixXd::Zero(Q.cols(), emb.Lambda.cols());
  Eigen::MatrixXd sum = step;

  SolveTrace trace;
  trace.iterations.reserve(static_cast<std::size_t>(iterations));
  for (int j = 1; j <= iterations; ++j) {
    residual.noalias() -= emb.lambda * y;
    residual.noalias() -= Q * step;
    const double residual_norm = residual.norm();
    if (options.residual_tolerance && residual_norm < *options.residual_tolerance) {
      trace.stopped_early = true;
      break;
    }
    y = precond.apply_inverse(residual);
    step.noalias() = Q.transpose() * y;
    sum += step;

    IterationRecord rec;
    rec.index = j;
    rec.residual_norm = residual_norm;
    if (options.keep_iterates) {
      rec.partial_sum = sum;
      rec.residual = residual;
      rec.correction = y;
    }
    if (options.exact) rec.error = (sum - *options.exact).norm();
    trace.iterations.push_back(std::move(rec));
  }
  trace.solution = std::move(sum);
  return trace;
}

}  // namespace rsbf
