// Reproducible random streams: a 256-bit seed plus a 64-bit stream counter
// drive a standard mt19937_64. All derived draws use explicit bit
// manipulation so results do not depend on the standard library vendor.
#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace lpe {

class RngStream {
 public:
  using Seed = std::array<std::uint64_t, 4>;

  RngStream(const Seed& seed, std::uint64_t counter = 0);
  static RngStream from_u64(std::uint64_t seed);
  static RngStream from_entropy();

  const Seed& seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() { return eng_(); }
  std::uint64_t uniform_below(std::uint64_t bound);  // [0, bound), bound > 0
  std::int64_t uniform_range(std::int64_t lo, std::int64_t hi);  // [lo, hi]
  double uniform01();  // [0, 1) with 53 random bits

  // Independent child stream; consumes four words from this stream.
  RngStream fork();
  // Child number `index` of this stream's seed; does not advance this stream.
  RngStream substream(std::uint64_t index) const;

 private:
  Seed seed_;
  std::uint64_t counter_;
  std::mt19937_64 eng_;
};

}  // namespace lpe
