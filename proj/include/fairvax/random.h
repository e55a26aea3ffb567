// Copyright 2026 The Authors.
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

#ifndef FAIRVAX_RANDOM_H_
#define FAIRVAX_RANDOM_H_

#include <cstdint>
#include <random>

namespace fairvax {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent stream seeds from a base
// seed and a task index so that results never depend on scheduling.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t DeriveSeed(uint64_t base, uint64_t index) {
  return MixSeed(MixSeed(base) ^ (index + 0x632be59bd9b4e019ULL));
}

}  // namespace fairvax

#endif  // FAIRVAX_RANDOM_H_
