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

#ifndef LIPDP_MANIFEST_H_
#define LIPDP_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace lipdp {

// Run record written next to every command's output.
struct Manifest {
  std::string version;
  std::string rng_version;
  std::string command;
  uint64_t seed = 0;
  std::string config_hash;
  // Canonical config JSON text.
  std::string config;
  double wall_time_seconds = 0.0;
  // Command-specific scalars, e.g. theoretical_mse.
  std::map<std::string, double> values;
};

std::string ManifestToJson(const Manifest& manifest);
absl::StatusOr<Manifest> ManifestFromJson(std::string_view text);

}  // namespace lipdp

#endif  // LIPDP_MANIFEST_H_
