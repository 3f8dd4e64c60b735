#pragma once

#include <cstdint>
#include <random>

namespace ugvrl {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds from a root
// seed so that per-episode / per-worker streams do not depend on run order.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(root) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Named sub-streams of a root seed.
enum class Stream : std::uint64_t {
  Episodes = 1,
  Exploration = 2,
  Init = 3,
  Replay = 4,
  Missions = 5,
  Evaluation = 6,
};

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream s) noexcept {
  return derive_seed(root, static_cast<std::uint64_t>(s) << 48);
}

}  // namespace ugvrl
