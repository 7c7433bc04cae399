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

#ifndef LIPDP_CONFIG_H_
#define LIPDP_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace lipdp {

// Resolved settings of one CLI run. Keys of the config file and long flag
// names coincide; see ConfigKeys().
struct ExperimentConfig {
  std::string command;
  double epsilon = 1.0;
  std::string adjacency = "composite";
  // Inferred from the input for privatize when absent; 1 elsewhere.
  std::optional<int> n;
  std::optional<int> m;
  double alpha = 1.0;
  int64_t trials = 100000;
  std::vector<double> lambda;
  bool bisect = false;
  double tol = 1e-3;
  std::optional<double> vmax;
  double big_m = 8.0;  // --M
  double nu = 0.05;
  uint64_t seed = 0;
  std::optional<std::string> input;
  std::optional<std::string> output;
  std::string format;  // command default when not given
  std::optional<std::string> mechanism;
  std::string density = "laplace1d";
  std::string audit = "lipschitz";
  std::string mode = "1d";
  bool overlay = false;
  std::optional<std::string> schedule;
  double quantization = 1.0;
  std::string map = "sign";

  int N() const { return n.value_or(1); }
  int Mdim() const { return m.value_or(1); }
};

// Every accepted key, in flag order.
const std::vector<std::string>& ConfigKeys();

// Valid values of the enumerated keys.
const std::vector<std::string>& ValidDensities();
const std::vector<std::string>& ValidAudits();
const std::vector<std::string>& ValidMechanisms();
const std::vector<std::string>& ValidCommands();

// Merges defaults < config file (flat JSON, keys exactly the long flag names)
// < command-line values (raw strings keyed by long flag name). Unknown keys,
// wrong types and out-of-range values are InvalidArgument. A missing or
// unreadable config file is NotFound.
absl::StatusOr<ExperimentConfig> ResolveConfig(
    const std::string& command, const std::map<std::string, std::string>& cli,
    const std::optional<std::string>& config_path);

// Canonical JSON of the resolved settings (sorted keys, absent optionals
// omitted) and its 64-bit FNV-1a hash as 16 hex digits.
std::string CanonicalConfigJson(const ExperimentConfig& config);
std::string ConfigHash(const ExperimentConfig& config);

// Parses "M:nu,M:nu,..." or "default".
absl::StatusOr<std::vector<std::pair<double, double>>> ParseSchedule(
    const std::string& text);

}  // namespace lipdp

#endif  // LIPDP_CONFIG_H_
