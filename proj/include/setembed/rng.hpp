// SPDX-License-Identifier: Apache-2.0
//
// Counter-based deterministic random number generation. Every stream is
// addressed by (seed, step, stream_id), so draws never depend on evaluation
// order and runs are reproducible bit-for-bit.
#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <vector>

namespace setembed {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; bijective on 64-bit integers.
inline std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Key of the stream addressed by (seed, step, stream_id).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t step,
                                std::uint64_t stream_id) {
  return mix64(mix64(mix64(seed) ^ step) ^ stream_id);
}

// The counter-th 64-bit word of a stream.
inline std::uint64_t stream_u64(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + (counter + 1) * kGolden);
}

// Uniform draw in (0, 1]; never 0, safe under log().
inline double stream_unit(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>((stream_u64(key, counter) >> 11) + 1) * 0x1.0p-53;
}

// count i.i.d. standard normal draws via Box-Muller.
inline std::vector<double> standard_normals(std::uint64_t key,
                                            std::size_t count) {
  std::vector<double> out(count);
  const double two_pi = 2.0 * M_PI;
  for (std::size_t p = 0; 2 * p < count; ++p) {
    const double u1 = stream_unit(key, 2 * p);
    const double u2 = stream_unit(key, 2 * p + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[2 * p] = r * std::cos(two_pi * u2);
    if (2 * p + 1 < count) out[2 * p + 1] = r * std::sin(two_pi * u2);
  }
  return out;
}

}  // namespace setembed
