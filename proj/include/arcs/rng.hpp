// Copyright 2026 The ARCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARCS_RNG_HPP
#define ARCS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace arcs {

// Counter-based pseudorandom primitives. Every random quantity in the
// library is a pure function of (seed, stream, counter), which makes any
// row, entry, or trial regenerable bit-identically without storing it.

namespace rng_detail {

// SplitMix64 finalizer; full-period bijective 64-bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace rng_detail

// Collapses (seed, stream, counter) into one well-mixed 64-bit word.
inline constexpr std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) {
  using rng_detail::mix64;
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Maps a 64-bit word to (0, 1]; never returns 0, so log() is safe.
inline double unit_open(std::uint64_t word) {
  return (static_cast<double>(word >> 11) + 1.0) * 0x1.0p-53;
}

// Maps a 64-bit word to [0, 1).
inline double unit_halfopen(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Standard normal draw at a fixed counter position (Box-Muller; consumes
// counters 2*idx and 2*idx+1 of the stream).
inline double normal_at(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t idx) {
  const double u1 = unit_open(hash3(seed, stream, 2 * idx));
  const double u2 = unit_halfopen(hash3(seed, stream, 2 * idx + 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential convenience generator over the same counter scheme.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_word() { return hash3(seed_, stream_, counter_++); }

  double uniform() { return unit_halfopen(next_word()); }  // [0, 1)

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = unit_open(next_word());
    const double u2 = unit_halfopen(next_word());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, bound); bound > 0. Rejection-free multiply-shift.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t word = next_word();
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(word) * bound) >> 64);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace arcs

#endif  // ARCS_RNG_HPP
