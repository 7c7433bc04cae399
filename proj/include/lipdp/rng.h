//
// Copyright 2026 The Lipschitz DP Authors
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
//

#ifndef LIPDP_RNG_H_
#define LIPDP_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

namespace lipdp {

// Name and version of the random stream. Any change to the engine, the seed
// derivation or the consumption order of a sampler bumps this string.
inline constexpr std::string_view kRngVersion = "mt19937_64+splitmix64/v1";

// Seed of stream `stream` under master seed `master`:
//   SplitMix64 finalizer of (master + (stream + 1) * 0x9e3779b97f4a7c15).
// Streams with distinct indices are used for independent tasks.
uint64_t DeriveStreamSeed(uint64_t master, uint64_t stream);

// Deterministic random stream. std::mt19937_64 is bit-exact by the standard;
// all conversions to reals are done here rather than with the
// implementation-defined <random> distributions.
class Rng {
 public:
  explicit Rng(uint64_t master_seed, uint64_t stream = 0);

  Rng Split(uint64_t stream) const { return Rng(master_seed_, stream); }

  uint64_t master_seed() const { return master_seed_; }
  uint64_t stream() const { return stream_; }

  uint64_t NextU64() { return engine_(); }

  // One word; top 53 bits; value in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // One word; value in the open interval (0, 1).
  double UniformOpen() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exponential(1) by inverse CDF. One word.
  double StandardExponential() { return -std::log(UniformOpen()); }

  // Two independent standard normals by Box-Muller. Two words: the first
  // sets the radius, the second the angle.
  std::pair<double, double> NormalPair();

 private:
  uint64_t master_seed_;
  uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace lipdp

#endif  // LIPDP_RNG_H_
