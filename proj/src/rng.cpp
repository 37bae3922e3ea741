#include "lpe/rng.hpp"

#include <vector>

namespace lpe {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(const RngStream::Seed& seed, std::uint64_t counter) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t w : seed) {
    words.push_back(static_cast<std::uint32_t>(w));
    words.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  words.push_back(static_cast<std::uint32_t>(counter));
  words.push_back(static_cast<std::uint32_t>(counter >> 32));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(const Seed& seed, std::uint64_t counter)
    : seed_(seed), counter_(counter), eng_(make_engine(seed, counter)) {}

RngStream RngStream::from_u64(std::uint64_t seed) {
  Seed s;
  std::uint64_t st = seed;
  for (auto& w : s) w = splitmix(st);
  return RngStream(s, 0);
}

RngStream RngStream::from_entropy() {
  std::random_device rd;
  Seed s;
  for (auto& w : s) w = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return RngStream(s, 0);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  // Rejection on the top multiple of bound keeps the result unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t RngStream::uniform_range(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<std::int64_t>(eng_());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + uniform_below(span + 1));
}

double RngStream::uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

RngStream RngStream::fork() {
  Seed s;
  for (auto& w : s) w = eng_();
  return RngStream(s, 0);
}

RngStream RngStream::substream(std::uint64_t index) const { return RngStream(seed_, counter_ + 1 + index); }

}  // namespace lpe
