#pragma once

#include <cstdint>
#include <string_view>

namespace rsbf {

// Counter-based generator "splitmix64-ctr-v1".
//
// A stream is identified by (seed, stream). Its key is
//   key = mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019))
// and the n-th 64-bit output (n = 0, 1, ...) is
//   mix64(key + (n + 1) * 0x9E3779B97F4A7C15)
// where mix64 is the SplitMix64 finalizer. Doubles take the top 53 bits.
// Normals use the Box-Muller transform on two consecutive uniforms, with the
// sine branch cached for the next call. The bit stream is fully specified
// here so other implementations can reproduce it.
class CounterRng {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-ctr-v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Standard normal.
  double normal();

  // Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

// Seed for trial `index` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace rsbf
