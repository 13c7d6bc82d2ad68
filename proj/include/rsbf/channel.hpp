#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rsbf/rng.hpp"

namespace rsbf {

// Single-cell downlink geometry and large-scale fading parameters.
// Defaults follow common macro-cell values; every field can be overridden.
struct ChannelConfig {
  int num_antennas = 256;                  // M
  int num_users = 16;                      // K
  double region_half_width = 5000.0;       // meters
  double pathloss_ref_db = 128.1;          // at 1 km
  double pathloss_exponent_db_per_decade = 37.6;
  double shadowing_std_db = 8.0;
  double antenna_gain_db = 5.0;
  double noise_power = 3.981071705534972e-14;  // sigma^2 [W], -104 dBm
  double transmit_power = 0.1;                 // P [W]
  std::uint64_t seed = 1;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct UserPosition {
  double x = 0.0;
  double y = 0.0;
  double distance() const;
};

// Rows are h_k^H, one per user.
struct ChannelMatrix {
  Eigen::MatrixXcd entries;
  std::vector<UserPosition> user_positions;
  // Per-user 10^{-L(d_k)/20} sqrt(phi_k s_k); entries.row(k) / amplitude(k) is the fading.
  Eigen::VectorXd large_scale_amplitudes;

  int num_users() const { return static_cast<int>(entries.rows()); }
  int num_antennas() const { return static_cast<int>(entries.cols()); }
};

inline constexpr double kMinUserDistance = 1.0;  // meters
inline constexpr long kMaxPlacementDraws = 1'000'000;

// Exclusion radius around the base station: 1 m, shrunk to half the region
// width for sub-meter regions so placement always terminates.
double min_user_distance(const ChannelConfig& cfg);

std::vector<UserPosition> place_users(const ChannelConfig& cfg, CounterRng& rng);

// Path loss in dB at distance d meters.
double pathloss_db(const ChannelConfig& cfg, double distance);

// 10^{-L(d)/20} * sqrt(phi * s) for a shadowing draw given in dB.
double large_scale_amplitude(const ChannelConfig& cfg, double distance, double shadowing_db);

// Scales row k of `fading` by the large-scale amplitude of user k.
ChannelMatrix assemble_channel(const ChannelConfig& cfg, std::vector<UserPosition> positions,
                               const Eigen::VectorXd& shadowing_db,
                               const Eigen::MatrixXcd& fading);

// Draw order: user positions, K shadowing normals, then K*M fading entries
// row by row (real part then imaginary part).
ChannelMatrix generate_channel(const ChannelConfig& cfg, CounterRng& rng);
ChannelMatrix generate_channel(const ChannelConfig& cfg);

}  // namespace rsbf
