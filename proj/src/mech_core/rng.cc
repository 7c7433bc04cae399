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

#include "lipdp/rng.h"

#include <cmath>
#include <numbers>

namespace lipdp {

uint64_t DeriveStreamSeed(uint64_t master, uint64_t stream) {
  uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(uint64_t master_seed, uint64_t stream)
    : master_seed_(master_seed),
      stream_(stream),
      engine_(DeriveStreamSeed(master_seed, stream)) {}

std::pair<double, double> Rng::NormalPair() {
  const double radius = std::sqrt(-2.0 * std::log(UniformOpen()));
  const double angle = 2.0 * std::numbers::pi * Uniform();
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace lipdp
