#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rsbf/metrics.hpp"
#include "rsbf/rzf.hpp"
#include "rsbf/solver.hpp"

using namespace rsbf;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXd dense_theta(const Eigen::MatrixXd& Q, const SketchMatrix& S, double lambda) {
  const Eigen::MatrixXd QS = Q * S.dense();
  Eigen::MatrixXd theta = QS * QS.transpose();
  theta.diagonal().array() += lambda;
  return theta;
}

RealEmbedding small_instance() {
  Eigen::MatrixXcd H(1, 2);
  H << cd(1, 0), cd(0, 0);
  return embed(H, 1.0, 1.0);
}

}  // namespace

TEST(Preconditioner, OrthonormalRowsIdentitySketch) {
  const auto emb = small_instance();
  const auto P = Preconditioner::factorize(emb.Q, SketchMatrix::identity(4), 1.0);
  for (Eigen::Index i = 0; i < P.spectrum().size(); ++i) EXPECT_NEAR(P.spectrum()(i), 1.0, 1e-15);
  std::mt19937_64 gen(40);
  const auto B = oracle::random_real(2, 3, gen);
  EXPECT_LT((P.apply_inverse(B) - 0.5 * B).norm(), 1e-15);
  EXPECT_TRUE(P.apply_inverse(Eigen::MatrixXd::Zero(2, 3)).isZero(0.0));
}

TEST(Preconditioner, ShortSketchHasZeroEigenvalues) {
  std::mt19937_64 gen(41);
  const auto Q = oracle::random_real(8, 32, gen);
  CounterRng rng(1);
  const auto S = draw_sketch(uniform_probs(32), 5, rng);
  const auto P = Preconditioner::factorize(Q, S, 0.3);
  const double top = P.spectrum().maxCoeff();
  EXPECT_GE((P.spectrum().array() <= 1e-12 * top).count(), 3);
  EXPECT_GE(P.spectrum().minCoeff(), 0.0);
  const auto B = oracle::random_real(8, 4, gen);
  const Eigen::MatrixXd X = P.apply_inverse(B);
  EXPECT_TRUE(X.allFinite());
  EXPECT_LT(oracle::rel_diff(dense_theta(Q, S, 0.3) * X, B), 1e-9);
}

TEST(Preconditioner, MatchesDenseSolve) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto Q = oracle::random_real(8, 40, gen);
    CounterRng rng(100 + trial);
    const auto S = draw_sketch(uniform_probs(40), 6, rng);
    const double lambda = 0.05 + 0.1 * trial;
    const auto P = Preconditioner::factorize(Q, S, lambda);
    const auto theta = dense_theta(Q, S, lambda);
    const auto B = oracle::random_real(8, 4, gen);
    EXPECT_LT(oracle::rel_diff(P.apply_inverse(B), theta.partialPivLu().solve(B)), 1e-9);
    EXPECT_LT(oracle::rel_diff(P.apply(P.apply_inverse(B)), B), 1e-9);
    EXPECT_LT(oracle::rel_diff(P.apply(B), theta * B), 1e-12);
    EXPECT_LT((P.basis().transpose() * P.basis() - Eigen::MatrixXd::Identity(8, 8)).norm(), 1e-8);
  }
}

TEST(Preconditioner, ScalarSpectrum) {
  // Q S = c I gives spectrum c^2 in every direction.
  Eigen::MatrixXd Q = 3.0 * Eigen::MatrixXd::Identity(4, 4);
  const auto P = Preconditioner::factorize(Q, SketchMatrix::identity(4), 2.0);
  std::mt19937_64 gen(43);
  const auto B = oracle::random_real(4, 2, gen);
  EXPECT_LT((P.apply_inverse(B) - B / 11.0).norm(), 1e-14);
}

TEST(Preconditioner, RejectsBadInput) {
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Ones(2, 4);
  EXPECT_THROW(Preconditioner::factorize(Q, SketchMatrix::identity(4), 0.0), std::invalid_argument);
  EXPECT_THROW(Preconditioner::factorize(Q, SketchMatrix::identity(3), 1.0), std::invalid_argument);
  SketchMatrix bad{4, {{0, std::numeric_limits<double>::infinity()}}};
  EXPECT_THROW(Preconditioner::factorize(Q, bad, 1.0), std::runtime_error);
  const auto P = Preconditioner::factorize(Q, SketchMatrix::identity(4), 1.0);
  EXPECT_THROW(P.apply_inverse(Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);
}

TEST(Iterate, IdentitySketchConvergesInOneStep) {
  std::mt19937_64 gen(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto emb = embed(oracle::random_complex(6, 30, gen), 0.1 + trial, 1.0);
    const auto exact = solve_exact_real(emb);
    const auto trace = iterate(emb, SketchMatrix::identity(60), 1);
    ASSERT_EQ(trace.iterations.size(), 1u);
    EXPECT_LT(oracle::rel_diff(trace.solution, exact), 1e-10);
  }
}

TEST(Iterate, ZeroRightHandSideStaysZero) {
  std::mt19937_64 gen(45);
  auto emb = embed(oracle::random_complex(3, 10, gen), 1.0, 1.0);
  emb.Lambda.setZero();
  CounterRng rng(2);
  const auto trace = iterate(emb, draw_sketch(uniform_probs(20), 8, rng), 5);
  for (const auto& rec : trace.iterations) {
    EXPECT_TRUE(rec.partial_sum.isZero(0.0));
    EXPECT_EQ(rec.residual_norm, 0.0);
  }
}

TEST(Iterate, ResidualMatchesClosedForm) {
  std::mt19937_64 gen(46);
  for (int trial = 0; trial < 10; ++trial) {
    const auto emb = embed(oracle::random_complex(4, 24, gen), 0.5, 1.0);
    CounterRng rng(200 + trial);
    const auto S = draw_sketch(leverage_probs(spectral_profile(emb.Q)), 32, rng);
    const auto trace = iterate(emb, S, 15);
    Eigen::MatrixXd A = emb.Q * emb.Q.transpose();
    A.diagonal().array() += emb.lambda;
    Eigen::MatrixXd ysum = Eigen::MatrixXd::Zero(8, 4);
    Eigen::MatrixXd msum = Eigen::MatrixXd::Zero(48, 4);
    for (const auto& rec : trace.iterations) {
      const Eigen::MatrixXd closed = emb.Lambda - A * ysum;
      const double scale = std::max(emb.Lambda.norm(), (A * ysum).norm());
      EXPECT_LT((rec.residual - closed).norm(), 1e-9 * scale);
      ysum += rec.correction;
      msum += emb.Q.transpose() * rec.correction;
      EXPECT_LT((rec.partial_sum - msum).norm(), 1e-12 * std::max(1.0, msum.norm()));
    }
  }
}

namespace {

// Runs uniform L = 2 sketches over seeds and checks the error never grows
// whenever the measured epsilon is below one. Returns the qualifying count.
int check_nonincreasing(const RealEmbedding& emb) {
  const auto exact = solve_exact_real(emb);
  const auto prof = spectral_profile(emb.Q);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CounterRng rng(seed);
    const auto S = draw_sketch(uniform_probs(4), 2, rng);
    if (!(2.0 * sketch_quality(prof, S) < 1.0)) continue;
    ++checked;
    IterateOptions opts;
    opts.exact = exact;
    const auto trace = iterate(emb, S, 20, opts);
    for (std::size_t j = 1; j < trace.iterations.size(); ++j)
      EXPECT_LE(*trace.iterations[j].error, *trace.iterations[j - 1].error + 1e-15 * exact.norm())
          << "seed " << seed;
  }
  return checked;
}

}  // namespace

// On the axis-aligned instance a uniform L = 2 sketch gives diagonal entries in
// {0, 2, 4}, so the hypothesis never holds and the check is vacuous.
TEST(Iterate, TinyInstanceErrorNonincreasing) {
  EXPECT_EQ(check_nonincreasing(small_instance()), 0);
  std::mt19937_64 gen(52);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial)
    checked += check_nonincreasing(embed(oracle::random_complex(1, 2, gen), 0.5, 1.0));
  EXPECT_GT(checked, 0);
}

TEST(Iterate, RejectsBadInput) {
  const auto emb = small_instance();
  EXPECT_THROW(iterate(emb, SketchMatrix::identity(4), 0), std::invalid_argument);
  EXPECT_THROW(iterate(emb, SketchMatrix::identity(3), 1), std::invalid_argument);
  IterateOptions opts;
  opts.exact = Eigen::MatrixXd::Zero(3, 1);
  EXPECT_THROW(iterate(emb, SketchMatrix::identity(4), 1, opts), std::invalid_argument);
}

TEST(Iterate, EarlyStopIsFlagged) {
  std::mt19937_64 gen(47);
  const auto emb = embed(oracle::random_complex(2, 8, gen), 1.0, 1.0);
  IterateOptions opts;
  opts.residual_tolerance = 1e-6;
  const auto trace = iterate(emb, SketchMatrix::identity(16), 10, opts);
  EXPECT_TRUE(trace.stopped_early);
  EXPECT_LT(trace.iterations.size(), 10u);
  const auto full = iterate(emb, SketchMatrix::identity(16), 10);
  EXPECT_FALSE(full.stopped_early);
  EXPECT_EQ(full.iterations.size(), 10u);
}

TEST(Iterate, KeepIteratesOff) {
  std::mt19937_64 gen(48);
  const auto emb = embed(oracle::random_complex(2, 8, gen), 1.0, 1.0);
  IterateOptions opts;
  opts.keep_iterates = false;
  const auto a = iterate(emb, SketchMatrix::identity(16), 3, opts);
  const auto b = iterate(emb, SketchMatrix::identity(16), 3);
  EXPECT_EQ(a.iterations.back().partial_sum.size(), 0);
  EXPECT_EQ(a.solution, b.solution);
  EXPECT_EQ(a.iterations.back().residual_norm, b.iterations.back().residual_norm);
}

TEST(Iterate, BeamformerLiftsSolution) {
  std::mt19937_64 gen(49);
  const auto H = oracle::random_complex(3, 12, gen);
  const double gamma = 2.0, sigma2 = 0.5;
  const auto emb = embed(H, sigma2 / gamma, 1.0);
  const auto trace = iterate(emb, SketchMatrix::identity(24), 1);
  EXPECT_LT(oracle::rel_diff(trace.beamformer(), solve_exact_complex(H, gamma, sigma2, 1.0)), 1e-10);
}

// Whenever the measured epsilon is below one, the error obeys the geometric bound.
TEST(IterateProperties, LeverageBoundHolds) {
  std::mt19937_64 gen(50);
  int qualifying = 0, holding = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto H = oracle::random_complex(4, 32, gen);
    const auto emb = embed(H, 0.5, 1.0);
    const auto prof = spectral_profile(emb.Q);
    CounterRng rng(1000 + trial);
    const auto S = draw_sketch(leverage_probs(prof), 64, rng);
    const double eps = 2.0 * sketch_quality(prof, S);
    if (!(eps < 1.0)) continue;
    ++qualifying;
    IterateOptions opts;
    opts.exact = solve_exact_real(emb);
    const double wn = opts.exact->norm();
    const auto trace = iterate(emb, S, 20, opts);
    bool ok = true;
    for (const auto& rec : trace.iterations)
      ok = ok && *rec.error <= error_bound(eps, rec.index, wn) + 1e-9 * wn;
    holding += ok;
  }
  ASSERT_GT(qualifying, 20);
  EXPECT_GE(holding, 0.95 * qualifying);
}

TEST(IterateProperties, RidgeBoundHolds) {
  std::mt19937_64 gen(51);
  int qualifying = 0, holding = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto H = oracle::random_complex(4, 32, gen);
    const auto emb = embed(H, 5.0, 1.0);
    const auto prof = spectral_profile(emb.Q);
    CounterRng rng(2000 + trial);
    const auto S = draw_sketch(ridge_leverage_probs(prof, emb.lambda), 1024, rng);
    const double eps = 4.0 * std::sqrt(2.0) * ridge_sketch_quality(prof, S, emb.lambda);
    if (!(eps < 1.0)) continue;
    ++qualifying;
    IterateOptions opts;
    opts.exact = solve_exact_real(emb);
    const double wn = opts.exact->norm();
    const auto trace = iterate(emb, S, 20, opts);
    bool ok = true;
    for (const auto& rec : trace.iterations)
      ok = ok && *rec.error <= ridge_error_bound(eps, rec.index, wn, emb.lambda, emb.Lambda, prof) + 1e-9 * wn;
    holding += ok;
  }
  ASSERT_GT(qualifying, 20);
  EXPECT_GE(holding, 0.95 * qualifying);
}
