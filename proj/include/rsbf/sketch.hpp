#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsbf/rng.hpp"

namespace rsbf {

enum class SamplingScheme { uniform, leverage, ridge_leverage };

std::string_view to_string(SamplingScheme scheme);
// Accepts "uniform", "leverage", "ridge_leverage". Throws std::invalid_argument.
SamplingScheme parse_scheme(std::string_view name);

// Column sampling distribution over the 2M columns of Q.
//
// `p` always sums to one and drives index selection. `mass` scales the
// probabilities used for rescaling: a selected column gets (L * mass * p_i)^{-1/2}.
// mass == 1 is the unbiased sampler; other values only exist to reproduce
// mis-normalized variants for comparison.
struct SamplingProbabilities {
  Eigen::VectorXd p;
  SamplingScheme scheme = SamplingScheme::uniform;
  double mass = 1.0;
};

// Throws std::invalid_argument if p has negative or non-finite entries or does
// not sum to one within 1e-10.
void validate(const SamplingProbabilities& probs);

struct SketchEntry {
  Eigen::Index row = 0;  // zero-based
  double value = 0.0;
};

// Sampling-and-rescaling matrix S (rows x L) with exactly one nonzero per column.
struct SketchMatrix {
  Eigen::Index rows = 0;
  std::vector<SketchEntry> columns;

  Eigen::Index cols() const { return static_cast<Eigen::Index>(columns.size()); }
  Eigen::MatrixXd dense() const;
  // A * S without forming S; A has `rows` columns. Cost O(A.rows() * L).
  Eigen::MatrixXd right_multiply(const Eigen::MatrixXd& A) const;

  // S = I_n as a sketch (L = n, unit values).
  static SketchMatrix identity(Eigen::Index n);
};

// Thin SVD Q = U diag(sigma) V^T with sigma sorted nonincreasing.
struct SpectralProfile {
  Eigen::VectorXd singular_values;  // 2K
  Eigen::MatrixXd right_vectors;    // V, 2M x 2K
  Eigen::MatrixXd left_vectors;     // U, 2K x 2K

  // Number of singular values above kRankTolerance * sigma_1.
  Eigen::Index rank() const;
};

inline constexpr double kRankTolerance = 1e-12;

SpectralProfile spectral_profile(const Eigen::MatrixXd& Q);

SamplingProbabilities uniform_probs(Eigen::Index n);

enum class LeverageNormalization {
  rank,      // divide by 2K; the scores sum to 2K so this is a distribution
  antennas,  // divide by 2M; reproduces a variant that is not normalized
};

// p_i = ||V_i*||^2 / 2K. Throws std::domain_error if Q is rank deficient.
SamplingProbabilities leverage_probs(const SpectralProfile& profile,
                                     LeverageNormalization norm = LeverageNormalization::rank);

// Raw leverage scores ||V_i*||^2.
Eigen::VectorXd leverage_scores(const SpectralProfile& profile);

// (Sigma_lambda)_ii = sqrt(sigma_i^2 / (sigma_i^2 + lambda)).
Eigen::VectorXd sigma_lambda(const SpectralProfile& profile, double lambda);

// d_lambda = sum sigma_i^2 / (sigma_i^2 + lambda).
double degrees_of_freedom(const SpectralProfile& profile, double lambda);

// Raw ridge leverage scores ||(V Sigma_lambda)_i*||^2.
Eigen::VectorXd ridge_leverage_scores(const SpectralProfile& profile, double lambda);

// p_i = ||(V Sigma_lambda)_i*||^2 / d_lambda.
SamplingProbabilities ridge_leverage_probs(const SpectralProfile& profile, double lambda);

// lambda = ||Q - Q_ell||_F^2 / ell = (sum_{i > ell} sigma_i^2) / ell.
// Requires 1 <= ell < rank(Q).
double ridge_param_from_rank(const SpectralProfile& profile, Eigen::Index ell);

// i.i.d. sampling with replacement; zero-probability rows are never drawn.
SketchMatrix draw_sketch(const SamplingProbabilities& probs, Eigen::Index num_samples, CounterRng& rng);

// ||V^T S S^T V - I||_2
double sketch_quality(const SpectralProfile& profile, const SketchMatrix& S);

// ||Sigma_l V^T S S^T V Sigma_l - Sigma_l^2||_2
double ridge_sketch_quality(const SpectralProfile& profile, const SketchMatrix& S, double lambda);

// Smallest L with L >= (16K / 3 eps^2) ln(4(1 + 2K) / delta).
Eigen::Index min_samples_leverage(int num_users, double epsilon, double delta);

// Smallest L with L >= (8 d / 3 eps^2) ln(4(1 + d) / delta).
Eigen::Index min_samples_ridge(double d_lambda, double epsilon, double delta);

}  // namespace rsbf
