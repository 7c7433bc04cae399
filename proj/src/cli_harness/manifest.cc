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

#include "lipdp/manifest.h"

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace lipdp {

std::string ManifestToJson(const Manifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["rng_version"] = m.rng_version;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  j["config"] = nlohmann::json::parse(m.config, nullptr, false);
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["values"] = m.values;
  return j.dump(2);
}

absl::StatusOr<Manifest> ManifestFromJson(std::string_view text) {
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("manifest is not a JSON object");
  }
  Manifest m;
  try {
    m.version = j.at("version").get<std::string>();
    m.rng_version = j.at("rng_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.config = j.at("config").dump();
    m.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    m.values = j.at("values").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed manifest: ", e.what()));
  }
  return m;
}

}  // namespace lipdp
