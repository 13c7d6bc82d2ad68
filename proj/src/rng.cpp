#include "rsbf/rng.hpp"

#include <cmath>
#include <numbers>

namespace rsbf {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0x632BE59BD9B4E019ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index * kGolden + 0xD1B54A32D192ED03ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), key_(mix64(seed ^ mix64(stream + kStreamSalt))) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(mix64(key_ ^ mix64(counter_ + kGolden)), stream);
}

}  // namespace rsbf
