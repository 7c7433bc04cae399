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

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_join.h"
#include "lipdp/commands.h"
#include "lipdp/config.h"

namespace {

struct Captured {
  std::map<std::string, std::string> scalars;
  std::vector<std::string> lambda;
  bool bisect = false;
  bool overlay = false;
  std::string config;
};

const char* HelpFor(const std::string& key) {
  static const std::map<std::string, const char*> help = {
      {"epsilon", "privacy parameter (> 0)"},
      {"adjacency", "l1, l2 or composite"},
      {"n", "users / vector dimension"},
      {"m", "dimensions per user (composite)"},
      {"alpha", "adjacency distance for ratio audits"},
      {"trials", "Monte Carlo trials"},
      {"lambda", "dual multipliers, comma separated"},
      {"bisect", "bisect for the critical multiplier"},
      {"tol", "bisection tolerance"},
      {"vmax", "integration horizon"},
      {"M", "LP truncation"},
      {"nu", "LP grid spacing"},
      {"seed", "master seed"},
      {"input", "input CSV"},
      {"output", "output path; side files use it as a prefix"},
      {"format", "csv or json"},
      {"mechanism", "laplace1d, l1, l2 or composite"},
      {"density", "audit subject (adds staircase, gaussian)"},
      {"audit", "lipschitz, dp-ratio, postprocess, cdf or gof"},
      {"mode", "dual problem: 1d or radial"},
      {"overlay", "add the closed-form column to dual CSVs"},
      {"schedule", "LP convergence schedule M:nu,... or default"},
      {"quantization", "staircase cell width"},
      {"map", "post-processing map: sign, constant or round"},
  };
  auto it = help.find(key);
  return it == help.end() ? "" : it->second;
}

void AddOptions(CLI::App* sub, Captured& cap) {
  for (const std::string& key : lipdp::ConfigKeys()) {
    const std::string flag = "--" + key;
    if (key == "bisect") {
      sub->add_flag(flag, cap.bisect, HelpFor(key));
    } else if (key == "overlay") {
      sub->add_flag(flag, cap.overlay, HelpFor(key));
    } else if (key == "lambda") {
      sub->add_option(flag, cap.lambda, HelpFor(key))->delimiter(',');
    } else {
      sub->add_option_function<std::string>(
          flag, [&cap, key](const std::string& v) { cap.scalars[key] = v; },
          HelpFor(key));
    }
  }
  sub->add_option("--config", cap.config, "JSON config file (flat keys)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz-private noise mechanisms, audits and certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LIPDP_VERSION);
  Captured cap;
  const std::map<std::string, std::string> descriptions = {
      {"privatize", "add mechanism noise to a CSV of user vectors"},
      {"mse", "Monte Carlo mean squared error against theory"},
      {"audit", "privacy and distribution audits"},
      {"dual", "dual ODE trajectories and critical multiplier"},
      {"lp", "discretized primal/dual linear program"},
  };
  for (const std::string& name : lipdp::ValidCommands()) {
    AddOptions(app.add_subcommand(name, descriptions.at(name)), cap);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? lipdp::kExitOk : lipdp::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  std::map<std::string, std::string> cli = cap.scalars;
  if (!cap.lambda.empty()) cli["lambda"] = absl::StrJoin(cap.lambda, ",");
  if (cap.bisect) cli["bisect"] = "true";
  if (cap.overlay) cli["overlay"] = "true";
  std::optional<std::string> config_path;
  if (!cap.config.empty()) config_path = cap.config;

  absl::StatusOr<lipdp::ExperimentConfig> config =
      lipdp::ResolveConfig(command, cli, config_path);
  if (!config.ok()) {
    std::cerr << "error: " << config.status().message() << "\n";
    return lipdp::ExitCodeFor(config.status());
  }
  return lipdp::RunCommand(*config, std::cout, std::cerr);
}
