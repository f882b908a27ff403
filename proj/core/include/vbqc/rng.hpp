// Copyright 2026 The vbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace vbqc {

/** Pseudo-random engine used everywhere; one instance per shot. */
using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Counter-based seed derivation. The seed of a substream depends only on
 * (master, stream, index, attempt), so shots can run in any order or on any
 * number of threads and still see the same randomness.
 */
constexpr std::uint64_t derive_seed(
    std::uint64_t master, std::uint64_t stream, std::uint64_t index,
    std::uint64_t attempt = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ attempt);
}

inline Engine make_engine(
    std::uint64_t master, std::uint64_t stream, std::uint64_t index,
    std::uint64_t attempt = 0) {
  return Engine(derive_seed(master, stream, index, attempt));
}

// The standard distributions are implementation-defined; these are not, so
// outputs are identical across standard libraries.

inline int random_bit(Engine& rng) { return static_cast<int>(rng() >> 63); }

/** Uniform integer in [0, n), n > 0, by rejection. */
inline std::uint64_t random_below(Engine& rng, std::uint64_t n) {
  const std::uint64_t limit = Engine::max() - Engine::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/** Uniform double in [0, 1). */
inline double random_unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace vbqc
