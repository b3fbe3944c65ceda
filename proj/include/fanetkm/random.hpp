#pragma once

#include <cstdint>
#include <random>

namespace fanetkm {

/// Purpose tags for per-node substreams. Streams with different tags are
/// independent, so e.g. changing how often metrics are sampled never perturbs
/// trajectories or key material.
enum class StreamPurpose : std::uint64_t {
  Mobility = 1,
  Keying = 2,
  Signing = 3,
  Test = 99,
};

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Substream for (run seed, node id, purpose).
  static RandomStream derive(std::uint64_t seed, std::uint64_t node, StreamPurpose purpose);

  /// Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi], inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// splitmix64 finalizer; used to decorrelate seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t node,
                                         StreamPurpose purpose) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ node);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  return RandomStream(h);
}

inline double RandomStream::uniform(double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

inline std::uint64_t RandomStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
}

inline double RandomStream::normal() { return normal_(engine_); }

}  // namespace fanetkm
