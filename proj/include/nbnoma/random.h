// Copyright 2026 The nbnoma Authors
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

#ifndef NBNOMA_RANDOM_H_
#define NBNOMA_RANDOM_H_

#include <cstdint>
#include <random>

namespace nbnoma {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; every variate is derived from raw
// 64-bit draws by explicit inversion, so results do not depend on the
// standard library's distribution implementations.
//
//   Uniform01():   ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
//   Uniform(a,b):  a + (b - a) * Uniform01()
//   Exponential(): -log(Uniform01()), mean 1, strictly positive
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double Uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  double Exponential();
  // Integer in [lo, hi], by rejection-free modulo of a 64-bit draw. The bias
  // is below 2^-40 for the small ranges used here.
  int UniformInt(int lo, int hi);
  uint64_t NextRaw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; a bijection on 64-bit words.
uint64_t SplitMix64(uint64_t x);

// Child seed for one Monte Carlo trial. Chains SplitMix64 over the master
// seed, the bit pattern of the sweep value, and the trial index.
uint64_t DeriveSeed(uint64_t master, double sweep_value, uint64_t trial);

}  // namespace nbnoma

#endif  // NBNOMA_RANDOM_H_
