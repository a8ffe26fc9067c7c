#pragma once

#include <cstdint>

namespace ugmt {

/// SplitMix64 finalizer; a bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by (seed, stream index).
///
/// The i-th draw of a stream is a pure function of (seed, stream, i), so
/// samples can be generated by any worker in any order with identical
/// results.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() { return mix64(key_ + 0xd1b54a32d192ed03ULL * (counter_++)); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Poisson variate by sequential inversion, split into chunks of mean at
  /// most 32 so that exp(-mean) never underflows.
  std::uint64_t poisson(double mean);

  /// Derive an independent child stream.
  RandomStream split(std::uint64_t child) const { return RandomStream(key_, child); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ugmt
