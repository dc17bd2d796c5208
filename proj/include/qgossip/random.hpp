#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace qgossip {

/// Seedable random source. The mapping from engine output to doubles and
/// indices is fixed here rather than left to <random> distributions, whose
/// algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi);

  /// Unbiased uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream id (splitmix64 finalizer), giving
/// independent seeds for sub-streams of one run.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace qgossip
