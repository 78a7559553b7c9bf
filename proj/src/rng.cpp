#include "edgeflight/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgeflight {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
  const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / span) * span;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return lo + static_cast<std::int64_t>(v % span);
}

double Rng::rayleigh(double scale) {
  const double u = uniform01();
  return scale * std::sqrt(-2.0 * std::log1p(-u));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= index; ++i) out = splitmix64(state);
  return out;
}

}  // namespace edgeflight
