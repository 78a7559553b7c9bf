#pragma once

#include <cstdint>
#include <random>

namespace edgeflight {

/// Seedable generator with a fully specified output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++ standard
/// and matches the reference MT19937-64 algorithm in every language port.
/// The standard distributions are not portable, so conversions are defined here:
///   - uniform01: top 53 bits of one engine output, times 2^-53, in [0, 1).
///   - uniform_int(lo, hi): rejection sampling on one 64-bit output per try,
///     accepting v < floor(2^64 / span) * span and returning lo + v % span.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Inclusive on both ends. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Rayleigh variate via inverse CDF: scale * sqrt(-2 ln(1 - u)).
  double rayleigh(double scale);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 step; used to derive independent sub-seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the i-th episode of a batch: the (i+1)-th SplitMix64 output from the master seed.
std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace edgeflight
