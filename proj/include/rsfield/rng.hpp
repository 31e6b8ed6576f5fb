#ifndef RSFIELD_RNG_HPP
#define RSFIELD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rsfield {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel generation is reproducible
/// regardless of scheduling. Mixing is the splitmix64 finalizer.
namespace rng {

constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z += golden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives a named sub-stream from a base seed.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ (golden * (tag + 1)));
}

inline std::uint64_t raw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(seed ^ golden * (stream + 1)) ^ counter * 0xD6E8FEB86659FD93ull);
}

/// Uniform in (0,1), never exactly 0.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (double(raw(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counter slots.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = uniform01(seed, stream, 2 * counter);
  const double u2 = uniform01(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace rng

}  // namespace rsfield

#endif
