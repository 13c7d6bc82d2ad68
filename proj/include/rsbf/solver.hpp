#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rsbf/realify.hpp"
#include "rsbf/sketch.hpp"

namespace rsbf {

// Implicit inverse of Theta = (QS)(QS)^T + lambda I, stored as the
// eigendecomposition of (QS)(QS)^T. Theta^{-1} is never formed.
class Preconditioner {
 public:
  // Throws std::invalid_argument for lambda <= 0 or non-conforming shapes,
  // std::runtime_error for a non-finite sketch.
  static Preconditioner factorize(const Eigen::MatrixXd& Q, const SketchMatrix& S, double lambda);
  // Same, from an already formed sketch QS (2K x L).
  static Preconditioner from_sketch(const Eigen::MatrixXd& QS, double lambda);

  // X with Theta X = B. Cost O(K^2) per column.
  Eigen::MatrixXd apply_inverse(const Eigen::MatrixXd& B) const;
  // Theta X, through the same factors.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;

  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& spectrum() const { return spectrum_; }
  double lambda() const { return lambda_; }

 private:
  Eigen::MatrixXd basis_;
  Eigen::VectorXd spectrum_;
  double lambda_ = 0.0;
};

struct IterateOptions {
  // Reference solution M* (2M x K) for per-iteration error tracking.
  std::optional<Eigen::MatrixXd> exact;
  // Stop once ||Lambda^(j)||_F falls below this value. Off by default.
  std::optional<double> residual_tolerance;
  // Keep the partial sums and residual matrices of every iteration.
  bool keep_iterates = true;
};

struct IterationRecord {
  int index = 0;                 // j, starting at 1
  Eigen::MatrixXd partial_sum;   // sum_{i<=j} M~^(i), 2M x K (empty unless kept)
  Eigen::MatrixXd residual;      // Lambda^(j), 2K x K (empty unless kept)
  Eigen::MatrixXd correction;    // Y^(j), 2K x K (empty unless kept)
  double residual_norm = 0.0;    // ||Lambda^(j)||_F
  std::optional<double> error;   // ||partial_sum - M*||_F
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;
  Eigen::MatrixXd solution;      // final partial sum, 2M x K
  bool stopped_early = false;

  // Complex beamformer lifted from the final partial sum.
  Eigen::MatrixXcd beamformer() const;
};

// Preconditioned Richardson iteration with E = QSS^TQ^T + lambda I and unit
// step, for (QQ^T + lambda I) Y = Lambda. Starts from Lambda^(0) = Lambda,
// Y^(0) = 0, M~^(0) = 0 and runs t steps:
//   Lambda^(j) = Lambda^(j-1) - lambda Y^(j-1) - Q M~^(j-1)
//   Y^(j)      = E^{-1} Lambda^(j)
//   M~^(j)     = Q^T Y^(j)
// S is fixed for all iterations.
SolveTrace iterate(const RealEmbedding& emb, const SketchMatrix& S, int iterations,
                   const IterateOptions& options = {});

// Same, reusing a factorized preconditioner.
SolveTrace iterate(const RealEmbedding& emb, const Preconditioner& precond, int iterations,
                   const IterateOptions& options = {});

}  // namespace rsbf
