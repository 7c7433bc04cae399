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

#ifndef LIPDP_COMMANDS_H_
#define LIPDP_COMMANDS_H_

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "lipdp/config.h"
#include "lipdp/privacy_params.h"

namespace lipdp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

// InvalidArgument -> 2; NotFound, PermissionDenied, DataLoss,
// Unavailable -> 4; any other error -> 3.
int ExitCodeFor(const absl::Status& status);

// Random stream of each command under the master seed.
inline constexpr uint64_t kPrivatizeStream = 1;
inline constexpr uint64_t kMseStream = 2;
inline constexpr uint64_t kAuditStream = 3;

// Data produced by a command before it is written anywhere.
struct CommandOutput {
  // Written to --output, or to stdout without it.
  std::string primary;
  // Written to <output><suffix>; dropped without --output.
  std::vector<std::pair<std::string, std::string>> extra_files;
  // Recorded in the manifest.
  std::map<std::string, double> manifest_values;
  // kExitOk, or kExitNumeric when the data was produced but a numeric
  // verdict (Inconclusive, IterLimit) needs attention.
  int exit_code = kExitOk;
  std::string message;
};

absl::StatusOr<CommandOutput> RunPrivatize(const ExperimentConfig& config);
absl::StatusOr<CommandOutput> RunMse(const ExperimentConfig& config);
absl::StatusOr<CommandOutput> RunAudit(const ExperimentConfig& config);
absl::StatusOr<CommandOutput> RunDual(const ExperimentConfig& config);
absl::StatusOr<CommandOutput> RunLp(const ExperimentConfig& config);

// Mechanism named by --mechanism, else derived from --adjacency (l1 with
// n m = 1 is the 1D Laplace mechanism).
absl::StatusOr<MechanismSpec> MechanismFromConfig(const ExperimentConfig& config);

// Runs config.command, writes outputs and the manifest (to
// <output>.manifest.json, or to `err` without --output) and returns the
// process exit code. Errors are reported on `err`.
int RunCommand(const ExperimentConfig& config, std::ostream& out,
               std::ostream& err);

}  // namespace lipdp

#endif  // LIPDP_COMMANDS_H_
