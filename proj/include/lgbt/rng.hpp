#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace lgbt {

/// Counter-based random stream.
///
/// Draw n of a stream with key k is splitmix64(k + n * gamma), so a stream is
/// fully described by (key, counter). `split(i)` derives a child key from the
/// parent key and `i` without advancing the parent; experiments hand one child
/// per trial so every trial replays identically regardless of scheduling.
///
/// Satisfies UniformRandomBitGenerator and can feed std distributions.
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kDefaultSeed = 0x6c696e2d6762742dULL;

  explicit RngStream(std::uint64_t seed = kDefaultSeed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  RngStream split(std::uint64_t index) const;

  /// Uniform in the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace lgbt
