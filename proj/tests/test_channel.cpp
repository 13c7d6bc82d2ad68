#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rsbf/channel.hpp"

using namespace rsbf;

TEST(PlaceUsers, StaysInsideSquare) {
  ChannelConfig cfg;
  cfg.num_users = 200;
  cfg.num_antennas = 200;
  cfg.region_half_width = 5000.0;
  CounterRng rng(42);
  const auto users = place_users(cfg, rng);
  ASSERT_EQ(users.size(), 200u);
  for (const auto& u : users) {
    EXPECT_GE(u.x, -5000.0);
    EXPECT_LE(u.x, 5000.0);
    EXPECT_GE(u.y, -5000.0);
    EXPECT_LE(u.y, 5000.0);
    EXPECT_GE(u.distance(), kMinUserDistance);
  }
}

TEST(PlaceUsers, Deterministic) {
  ChannelConfig cfg;
  CounterRng a(7), b(7);
  const auto ua = place_users(cfg, a);
  const auto ub = place_users(cfg, b);
  for (std::size_t i = 0; i < ua.size(); ++i) {
    EXPECT_EQ(ua[i].x, ub[i].x);
    EXPECT_EQ(ua[i].y, ub[i].y);
  }
}

TEST(PlaceUsers, SubMeterRegionTerminates) {
  ChannelConfig cfg;
  cfg.region_half_width = 0.5;
  cfg.num_users = 64;
  cfg.num_antennas = 64;
  CounterRng rng(3);
  const auto users = place_users(cfg, rng);
  EXPECT_LT(rng.counter(), 1'000'000u);
  for (const auto& u : users) {
    EXPECT_LE(std::abs(u.x), 0.5);
    EXPECT_GE(u.distance(), min_user_distance(cfg));
  }
}

TEST(GenerateChannel, ClosedFormScaleAtOneKilometre) {
  ChannelConfig cfg;
  cfg.num_users = 2;
  cfg.num_antennas = 3;
  cfg.shadowing_std_db = 0.0;
  cfg.antenna_gain_db = 0.0;
  cfg.pathloss_ref_db = 128.1;
  cfg.pathloss_exponent_db_per_decade = 37.6;
  const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Constant(2, 3, {1.0, 0.0});
  const auto ch = assemble_channel(cfg, {{1000.0, 0.0}, {0.0, -1000.0}}, Eigen::VectorXd::Zero(2), ones);
  for (Eigen::Index k = 0; k < 2; ++k)
    for (Eigen::Index m = 0; m < 3; ++m) EXPECT_NEAR(ch.entries(k, m).real(), 3.9355007545577803e-07, 1e-20);
}

TEST(GenerateChannel, SameSeedBitIdentical) {
  ChannelConfig cfg;
  cfg.seed = 99;
  const auto a = generate_channel(cfg);
  const auto b = generate_channel(cfg);
  EXPECT_TRUE((a.entries.array() == b.entries.array()).all());
  cfg.seed = 100;
  const auto c = generate_channel(cfg);
  EXPECT_FALSE((a.entries.array() == c.entries.array()).all());
}

TEST(GenerateChannel, UnitVarianceFadingMonteCarlo) {
  ChannelConfig cfg;
  cfg.num_users = 1;
  cfg.num_antennas = 1;
  cfg.pathloss_ref_db = 0.0;
  cfg.pathloss_exponent_db_per_decade = 0.0;
  cfg.shadowing_std_db = 0.0;
  cfg.antenna_gain_db = 0.0;
  double sum = 0.0;
  const int n = 100000;
  for (int s = 0; s < n; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    sum += std::norm(generate_channel(cfg).entries(0, 0));
  }
  EXPECT_NEAR(sum / n, 1.0, 0.03);
}

TEST(GenerateChannel, FadingIsCircularGaussianAfterRemovingLargeScale) {
  ChannelConfig cfg;
  cfg.num_users = 10;
  cfg.num_antennas = 1000;
  cfg.seed = 2024;
  const auto ch = generate_channel(cfg);
  std::vector<double> re, im;
  for (Eigen::Index k = 0; k < ch.entries.rows(); ++k) {
    for (Eigen::Index m = 0; m < ch.entries.cols(); ++m) {
      const auto f = ch.entries(k, m) / ch.large_scale_amplitudes(k);
      re.push_back(f.real());
      im.push_back(f.imag());
    }
  }
  EXPECT_GT(oracle::ks_normal_pvalue(re, std::sqrt(0.5)), 0.01);
  EXPECT_GT(oracle::ks_normal_pvalue(im, std::sqrt(0.5)), 0.01);
}

TEST(GenerateChannel, FiniteWithNoZeroRows) {
  ChannelConfig cfg;
  cfg.num_users = 32;
  cfg.num_antennas = 64;
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.seed = s;
    const auto ch = generate_channel(cfg);
    EXPECT_TRUE(ch.entries.allFinite());
    EXPECT_TRUE((ch.entries.rowwise().squaredNorm().array() > 0.0).all());
  }
}

TEST(ChannelConfig, RejectsInvalid) {
  ChannelConfig cfg;
  cfg.num_antennas = 4;
  cfg.num_users = 5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.noise_power = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.transmit_power = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.region_half_width = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.num_users = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(CounterRng, SplitStreamsDiffer) {
  CounterRng base(5);
  CounterRng a = base.split(1), b = base.split(2);
  EXPECT_NE(a.next_u64(), b.next_u64());
  CounterRng c(5, 1), d(5, 1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(c.next_u64(), d.next_u64());
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(11);
  double su = 0, sn = 0, sn2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.01);
}
