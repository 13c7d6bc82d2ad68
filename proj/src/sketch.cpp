#include "rsbf/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rsbf {

namespace {

// Spectral norm of a symmetric matrix.
double symmetric_norm2(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

void check_sample_size_args(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
}

Eigen::Index ceil_to_index(double x) {
  // Guard against x landing a hair above an integer through rounding.
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, r)) return static_cast<Eigen::Index>(r);
  return static_cast<Eigen::Index>(std::ceil(x));
}

}  // namespace

std::string_view to_string(SamplingScheme scheme) {
  switch (scheme) {
    case SamplingScheme::uniform: return "uniform";
    case SamplingScheme::leverage: return "leverage";
    case SamplingScheme::ridge_leverage: return "ridge_leverage";
  }
  return "unknown";
}

SamplingScheme parse_scheme(std::string_view name) {
  if (name == "uniform") return SamplingScheme::uniform;
  if (name == "leverage") return SamplingScheme::leverage;
  if (name == "ridge_leverage") return SamplingScheme::ridge_leverage;
  throw std::invalid_argument("unknown sampling scheme: " + std::string(name));
}

void validate(const SamplingProbabilities& probs) {
  if (probs.p.size() == 0) throw std::invalid_argument("sampling probabilities: empty");
  if (!probs.p.allFinite() || (probs.p.array() < 0.0).any())
    throw std::invalid_argument("sampling probabilities: entries must be finite and nonnegative");
  if (std::abs(probs.p.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("sampling probabilities: must sum to one");
  if (!(probs.mass > 0.0)) throw std::invalid_argument("sampling probabilities: mass must be positive");
}

Eigen::MatrixXd SketchMatrix::dense() const {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(rows, cols());
  for (Eigen::Index j = 0; j < cols(); ++j) S(columns[j].row, j) = columns[j].value;
  return S;
}

Eigen::MatrixXd SketchMatrix::right_multiply(const Eigen::MatrixXd& A) const {
  if (A.cols() != rows) throw std::invalid_argument("SketchMatrix: shape mismatch");
  Eigen::MatrixXd out(A.rows(), cols());
  for (Eigen::Index j = 0; j < cols(); ++j) out.col(j) = columns[j].value * A.col(columns[j].row);
  return out;
}

SketchMatrix SketchMatrix::identity(Eigen::Index n) {
  SketchMatrix S;
  S.rows = n;
  S.columns.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) S.columns[i] = {i, 1.0};
  return S;
}

Eigen::Index SpectralProfile::rank() const {
  if (singular_values.size() == 0 || singular_values(0) <= 0.0) return 0;
  const double cutoff = kRankTolerance * singular_values(0);
  return (singular_values.array() > cutoff).count();
}

SpectralProfile spectral_profile(const Eigen::MatrixXd& Q) {
  if (Q.rows() > Q.cols()) throw std::invalid_argument("spectral_profile: expected a wide matrix");
  if (!Q.allFinite()) throw std::invalid_argument("spectral_profile: non-finite input");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Q, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SpectralProfile profile;
  profile.singular_values = svd.singularValues();
  profile.left_vectors = svd.matrixU();
  profile.right_vectors = svd.matrixV();
  return profile;
}

SamplingProbabilities uniform_probs(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("uniform_probs: n must be >= 1");
  return {Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)), SamplingScheme::uniform, 1.0};
}

Eigen::VectorXd leverage_scores(const SpectralProfile& profile) {
  return profile.right_vectors.rowwise().squaredNorm();
}

SamplingProbabilities leverage_probs(const SpectralProfile& profile, LeverageNormalization norm) {
  const Eigen::Index full = profile.singular_values.size();
  if (profile.rank() < full)
    throw std::domain_error("leverage_probs: Q is rank deficient (rank " + std::to_string(profile.rank()) +
                            " < " + std::to_string(full) + ")");
  SamplingProbabilities out;
  out.scheme = SamplingScheme::leverage;
  out.p = leverage_scores(profile) / static_cast<double>(full);
  if (norm == LeverageNormalization::antennas) {
    out.mass = static_cast<double>(full) / static_cast<double>(profile.right_vectors.rows());
  }
  return out;
}

Eigen::VectorXd sigma_lambda(const SpectralProfile& profile, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sigma_lambda: lambda must be positive");
  const Eigen::ArrayXd s2 = profile.singular_values.array().square();
  return (s2 / (s2 + lambda)).sqrt().matrix();
}

double degrees_of_freedom(const SpectralProfile& profile, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("degrees_of_freedom: lambda must be positive");
  const Eigen::ArrayXd s2 = profile.singular_values.array().square();
  return (s2 / (s2 + lambda)).sum();
}

Eigen::VectorXd ridge_leverage_scores(const SpectralProfile& profile, double lambda) {
  const Eigen::VectorXd weights = sigma_lambda(profile, lambda);
  return (profile.right_vectors * weights.asDiagonal()).rowwise().squaredNorm();
}

SamplingProbabilities ridge_leverage_probs(const SpectralProfile& profile, double lambda) {
  const double d = degrees_of_freedom(profile, lambda);
  if (!(d > 0.0)) throw std::domain_error("ridge_leverage_probs: zero degrees of freedom");
  SamplingProbabilities out;
  out.scheme = SamplingScheme::ridge_leverage;
  out.p = ridge_leverage_scores(profile, lambda) / d;
  return out;
}

double ridge_param_from_rank(const SpectralProfile& profile, Eigen::Index ell) {
  const Eigen::Index r = profile.rank();
  if (ell < 1 || ell >= r)
    throw std::invalid_argument("ridge_param_from_rank: need 1 <= ell < rank(Q) = " + std::to_string(r));
  const Eigen::Index tail = profile.singular_values.size() - ell;
  return profile.singular_values.tail(tail).squaredNorm() / static_cast<double>(ell);
}

SketchMatrix draw_sketch(const SamplingProbabilities& probs, Eigen::Index num_samples, CounterRng& rng) {
  validate(probs);
  if (num_samples < 1) throw std::invalid_argument("draw_sketch: L must be >= 1");

  const Eigen::Index n = probs.p.size();
  std::vector<double> cumulative(static_cast<std::size_t>(n));
  std::partial_sum(probs.p.data(), probs.p.data() + n, cumulative.begin());
  const double total = cumulative.back();
  Eigen::Index last_positive = n - 1;
  while (probs.p(last_positive) <= 0.0) --last_positive;

  SketchMatrix S;
  S.rows = n;
  S.columns.reserve(static_cast<std::size_t>(num_samples));
  const double L = static_cast<double>(num_samples);
  for (Eigen::Index j = 0; j < num_samples; ++j) {
    const double u = rng.uniform() * total;
    // First index whose cumulative mass exceeds u; never a zero-mass row.
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    Eigen::Index i = std::min<Eigen::Index>(it - cumulative.begin(), last_positive);
    S.columns.push_back({i, 1.0 / std::sqrt(L * probs.mass * probs.p(i))});
  }
  return S;
}

double sketch_quality(const SpectralProfile& profile, const SketchMatrix& S) {
  const Eigen::MatrixXd Vt = profile.right_vectors.transpose();
  const Eigen::MatrixXd VtS = S.right_multiply(Vt);
  Eigen::MatrixXd G = VtS * VtS.transpose();
  G.diagonal().array() -= 1.0;
  return symmetric_norm2(G);
}

double ridge_sketch_quality(const SpectralProfile& profile, const SketchMatrix& S, double lambda) {
  const Eigen::VectorXd w = sigma_lambda(profile, lambda);
  const Eigen::MatrixXd WVt = w.asDiagonal() * profile.right_vectors.transpose();
  const Eigen::MatrixXd WVtS = S.right_multiply(WVt);
  Eigen::MatrixXd G = WVtS * WVtS.transpose();
  G.diagonal() -= w.cwiseAbs2();
  return symmetric_norm2(G);
}

Eigen::Index min_samples_leverage(int num_users, double epsilon, double delta) {
  check_sample_size_args(epsilon, delta);
  if (num_users < 1) throw std::invalid_argument("min_samples_leverage: K must be >= 1");
  const double k = num_users;
  return ceil_to_index(16.0 * k / (3.0 * epsilon * epsilon) * std::log(4.0 * (1.0 + 2.0 * k) / delta));
}

Eigen::Index min_samples_ridge(double d_lambda, double epsilon, double delta) {
  check_sample_size_args(epsilon, delta);
  if (!(d_lambda > 0.0)) throw std::invalid_argument("min_samples_ridge: d_lambda must be positive");
  return ceil_to_index(8.0 * d_lambda / (3.0 * epsilon * epsilon) * std::log(4.0 * (1.0 + d_lambda) / delta));
}

}  // namespace rsbf
