#include "rsbf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rsbf {

void ChannelConfig::validate() const {
  if (num_users < 1) throw std::invalid_argument("ChannelConfig: K must be >= 1");
  if (num_antennas < num_users) throw std::invalid_argument("ChannelConfig: M must be >= K");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw std::invalid_argument("ChannelConfig: noise_power must be positive");
  if (!(transmit_power > 0.0) || !std::isfinite(transmit_power))
    throw std::invalid_argument("ChannelConfig: transmit_power must be positive");
  if (!(region_half_width > 0.0) || !std::isfinite(region_half_width))
    throw std::invalid_argument("ChannelConfig: region_half_width must be positive");
  if (!(shadowing_std_db >= 0.0)) throw std::invalid_argument("ChannelConfig: shadowing_std_db must be >= 0");
}

double min_user_distance(const ChannelConfig& cfg) {
  return std::min(kMinUserDistance, 0.5 * cfg.region_half_width);
}

double UserPosition::distance() const { return std::hypot(x, y); }

std::vector<UserPosition> place_users(const ChannelConfig& cfg, CounterRng& rng) {
  cfg.validate();
  const double w = cfg.region_half_width;
  const double guard = min_user_distance(cfg);
  std::vector<UserPosition> users;
  users.reserve(static_cast<std::size_t>(cfg.num_users));
  long draws = 0;
  while (static_cast<int>(users.size()) < cfg.num_users) {
    if (++draws > kMaxPlacementDraws) throw std::runtime_error("place_users: placement did not converge");
    UserPosition p{rng.uniform(-w, w), rng.uniform(-w, w)};
    if (p.distance() < guard) continue;
    users.push_back(p);
  }
  return users;
}

double pathloss_db(const ChannelConfig& cfg, double distance) {
  return cfg.pathloss_ref_db + cfg.pathloss_exponent_db_per_decade * std::log10(distance / 1000.0);
}

double large_scale_amplitude(const ChannelConfig& cfg, double distance, double shadowing_db) {
  const double antenna_gain = std::pow(10.0, cfg.antenna_gain_db / 10.0);
  const double shadowing = std::pow(10.0, shadowing_db / 10.0);
  return std::pow(10.0, -pathloss_db(cfg, distance) / 20.0) * std::sqrt(antenna_gain * shadowing);
}

ChannelMatrix assemble_channel(const ChannelConfig& cfg, std::vector<UserPosition> positions,
                               const Eigen::VectorXd& shadowing_db,
                               const Eigen::MatrixXcd& fading) {
  const auto k_users = static_cast<Eigen::Index>(positions.size());
  if (shadowing_db.size() != k_users || fading.rows() != k_users)
    throw std::invalid_argument("assemble_channel: per-user inputs disagree in length");

  ChannelMatrix out;
  out.entries = fading;
  out.large_scale_amplitudes.resize(k_users);
  for (Eigen::Index k = 0; k < k_users; ++k) {
    out.large_scale_amplitudes(k) = large_scale_amplitude(cfg, positions[k].distance(), shadowing_db(k));
    out.entries.row(k) *= out.large_scale_amplitudes(k);
  }
  if (!out.entries.allFinite())
    throw std::runtime_error("generate_channel: non-finite channel coefficients");
  out.user_positions = std::move(positions);
  return out;
}

ChannelMatrix generate_channel(const ChannelConfig& cfg, CounterRng& rng) {
  auto positions = place_users(cfg, rng);

  Eigen::VectorXd shadowing_db(cfg.num_users);
  for (int k = 0; k < cfg.num_users; ++k) shadowing_db(k) = cfg.shadowing_std_db * rng.normal();

  // Unit-variance circularly-symmetric complex Gaussian.
  const double scale = std::numbers::sqrt2 / 2.0;
  Eigen::MatrixXcd fading(cfg.num_users, cfg.num_antennas);
  for (int k = 0; k < cfg.num_users; ++k) {
    for (int m = 0; m < cfg.num_antennas; ++m) {
      const double re = rng.normal();
      const double im = rng.normal();
      fading(k, m) = {scale * re, scale * im};
    }
  }
  return assemble_channel(cfg, std::move(positions), shadowing_db, fading);
}

ChannelMatrix generate_channel(const ChannelConfig& cfg) {
  CounterRng rng(cfg.seed);
  return generate_channel(cfg, rng);
}

}  // namespace rsbf
