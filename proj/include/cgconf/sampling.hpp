#pragma once

// Seeded, per-sample random streams. Sample i of a run seeded with s always
// draws from the generator seeded by seed_seq{s, i}, so results do not depend
// on evaluation order.

#include "cgconf/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace cgconf {

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline Vec gaussian_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = N(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform point of the closed Euclidean ball of the given radius.
inline Vec uniform_in_ball(std::mt19937_64& rng, int n, double radius) {
  Vec d = gaussian_vec(rng, n);
  while (d.norm() == 0.0) d = gaussian_vec(rng, n);
  const double r = radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / n);
  return r * d / d.norm();
}

/// Uniform direction on the unit sphere of ℝⁿ.
inline Vec uniform_direction(std::mt19937_64& rng, int n) {
  Vec d = gaussian_vec(rng, n);
  while (d.norm() == 0.0) d = gaussian_vec(rng, n);
  return d / d.norm();
}

}  // namespace cgconf
