// Copyright 2026 The bdlbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BDLBENCH_RANDOM_HPP_
#define BDLBENCH_RANDOM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace bdlbench {

// Every random draw in the library goes through an Rng created from a
// (seed, stream name) pair, so init / dropout / data order never share state.
using Rng = std::mt19937_64;

// FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t HashStreamName(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

inline Rng MakeRng(std::uint64_t seed, std::string_view stream) {
  const std::uint64_t tag = HashStreamName(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(tag >> 32)};
  return Rng(seq);
}

// Uniform double in [0, 1) built from the top 53 bits.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on UniformUnit, so results do not depend on
// the standard library's distribution implementations.
inline double StandardNormal(Rng& rng) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double u1 = UniformUnit(rng);
  while (u1 <= 0.0) u1 = UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Uniform index in [0, n), n > 0.
inline std::size_t UniformIndex(Rng& rng, std::size_t n) {
  const auto j = static_cast<std::size_t>(UniformUnit(rng) * static_cast<double>(n));
  return j < n ? j : n - 1;
}

inline bool Bernoulli(Rng& rng, double p) { return UniformUnit(rng) < p; }

// Fisher-Yates; std::shuffle's output is implementation-defined.
template <typename It>
void Shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::size_t>(last - first);
  for (std::size_t i = n; i > 1; --i) {
    std::iter_swap(first + (i - 1), first + UniformIndex(rng, i));
  }
}

}  // namespace bdlbench

#endif  // BDLBENCH_RANDOM_HPP_
