// Copyright 2026 The wvdst Authors
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

// Reproducible per-task random streams. A master seed and a tuple of task
// coordinates (experiment, grid point, repetition, observable, ...) are mixed
// with splitmix64 into the seed of an independent mt19937_64. Any task's
// stream depends only on its coordinates, never on scheduling order.

#ifndef WVDST_RNG_HPP
#define WVDST_RNG_HPP

#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <random>

namespace wvdst {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
  return h;
}

inline std::uint64_t double_bits(double x) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &x, sizeof bits);
  return bits;
}

/// Root of a family of streams. `child` appends coordinates to the key.
class StreamKey {
 public:
  explicit StreamKey(std::uint64_t master_seed) : key_(splitmix64(master_seed)) {}

  StreamKey child(std::initializer_list<std::uint64_t> coords) const {
    StreamKey k(*this);
    k.key_ = mix_key(key_, coords);
    return k;
  }

  Engine engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)};
    return Engine(seq);
  }

  std::uint64_t value() const { return key_; }

 private:
  std::uint64_t key_ = 0;
};

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace wvdst

#endif  // WVDST_RNG_HPP
