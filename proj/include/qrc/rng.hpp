#pragma once

#include <cstdint>
#include <random>

namespace qrc {

// Seedable generator with a platform-independent output sequence.
//
// The engine is std::mt19937_64, whose output is fully specified by the
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so the conversions to real variates live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, stream), mixed through splitmix64.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) { return low + (high - low) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal variate (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qrc
