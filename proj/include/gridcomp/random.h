// Copyright 2026 The Gridcomp Authors.
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

#ifndef GRIDCOMP_RANDOM_H_
#define GRIDCOMP_RANDOM_H_

#include <cstdint>
#include <random>

namespace gridcomp {

// splitmix64 finalizer; used to derive independent per-item seeds so that
// generated data does not depend on how work is scheduled.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t salt) {
  return MixSeed(base ^ MixSeed(salt));
}

// mt19937_64 is fully specified by the standard, unlike the distribution
// classes, so draws go through Uniform() to stay identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n). n must be positive.
  int Uniform(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // Uniform integer in [lo, hi].
  int Between(int lo, int hi) { return lo + Uniform(hi - lo + 1); }

  // True with probability num/den.
  bool Chance(int num, int den) { return Uniform(den) < num; }

  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gridcomp

#endif  // GRIDCOMP_RANDOM_H_
