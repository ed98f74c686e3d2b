// Copyright 2026 The Cadenza Eval Authors. All Rights Reserved.
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

#ifndef CADENZA_RNG_H_
#define CADENZA_RNG_H_

#include <cstdint>
#include <random>

namespace cadenza {

// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based child seed: the value depends only on (master, counter), so
// work items can be generated in any order.
constexpr uint64_t DeriveSeed(uint64_t master, uint64_t counter) {
  return SplitMix64(SplitMix64(master) ^ SplitMix64(~counter));
}

using Rng = std::mt19937_64;

// Uniform index in [0, n).
inline size_t UniformIndex(Rng& rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

}  // namespace cadenza

#endif  // CADENZA_RNG_H_
