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

#include "lipdp/config.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "lipdp/lp.h"

namespace lipdp {
namespace {

using Json = nlohmann::json;

enum class Kind { kNumber, kInt, kUint64, kString, kBool, kNumberList };

const std::vector<std::pair<std::string, Kind>>& Schema() {
  static const auto* schema = new std::vector<std::pair<std::string, Kind>>{
      {"epsilon", Kind::kNumber},   {"adjacency", Kind::kString},
      {"n", Kind::kInt},            {"m", Kind::kInt},
      {"alpha", Kind::kNumber},     {"trials", Kind::kInt},
      {"lambda", Kind::kNumberList}, {"bisect", Kind::kBool},
      {"tol", Kind::kNumber},       {"vmax", Kind::kNumber},
      {"M", Kind::kNumber},         {"nu", Kind::kNumber},
      {"seed", Kind::kUint64},      {"input", Kind::kString},
      {"output", Kind::kString},    {"format", Kind::kString},
      {"mechanism", Kind::kString}, {"density", Kind::kString},
      {"audit", Kind::kString},     {"mode", Kind::kString},
      {"overlay", Kind::kBool},     {"schedule", Kind::kString},
      {"quantization", Kind::kNumber}, {"map", Kind::kString},
  };
  return *schema;
}

std::optional<Kind> KindOf(const std::string& key) {
  for (const auto& [name, kind] : Schema()) {
    if (name == key) return kind;
  }
  return std::nullopt;
}

absl::Status UnknownKey(const std::string& key, std::string_view where) {
  return absl::InvalidArgumentError(
      absl::StrCat("unknown ", std::string(where), " key '", key,
                   "'; valid keys: ", absl::StrJoin(ConfigKeys(), ", ")));
}

std::optional<double> ParseDouble(const std::string& text) {
  if (text.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) return std::nullopt;
  return v;
}

absl::StatusOr<Json> FromCliString(const std::string& key, Kind kind,
                                   const std::string& text) {
  const auto bad = [&](std::string_view expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "--", key, ": expected ", std::string(expected), ", got '", text, "'"));
  };
  switch (kind) {
    case Kind::kNumber: {
      std::optional<double> v = ParseDouble(text);
      if (!v) return bad("a number");
      return Json(*v);
    }
    case Kind::kInt: {
      errno = 0;
      char* end = nullptr;
      const long long v = std::strtoll(text.c_str(), &end, 10);
      if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        return bad("an integer");
      }
      return Json(static_cast<int64_t>(v));
    }
    case Kind::kUint64: {
      errno = 0;
      char* end = nullptr;
      const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
      if (text.empty() || text[0] == '-' ||
          end != text.c_str() + text.size() || errno == ERANGE) {
        return bad("an unsigned 64-bit integer");
      }
      return Json(static_cast<uint64_t>(v));
    }
    case Kind::kString:
      return Json(text);
    case Kind::kBool:
      if (text == "true" || text == "1") return Json(true);
      if (text == "false" || text == "0") return Json(false);
      return bad("true or false");
    case Kind::kNumberList: {
      Json list = Json::array();
      for (const std::string& part : std::vector<std::string>(absl::StrSplit(text, ','))) {
        std::optional<double> v = ParseDouble(std::string(part));
        if (!v) return bad("a comma-separated list of numbers");
        list.push_back(*v);
      }
      return list;
    }
  }
  return bad("a value");
}

absl::Status CheckJsonType(const std::string& key, Kind kind, Json& value) {
  const auto bad = [&](std::string_view expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key '", key, "': expected ",
                     std::string(expected), ", got ", value.dump()));
  };
  switch (kind) {
    case Kind::kNumber:
      if (!value.is_number()) return bad("a number");
      return absl::OkStatus();
    case Kind::kInt:
      if (value.is_number_float()) {
        const double d = value.get<double>();
        if (d != std::floor(d) || std::abs(d) > 9e15) return bad("an integer");
        value = static_cast<int64_t>(d);
      }
      if (!value.is_number_integer()) return bad("an integer");
      return absl::OkStatus();
    case Kind::kUint64:
      if (!value.is_number_integer() ||
          (!value.is_number_unsigned() && value.get<int64_t>() < 0)) {
        return bad("an unsigned 64-bit integer");
      }
      value = value.get<uint64_t>();
      return absl::OkStatus();
    case Kind::kString:
      if (!value.is_string()) return bad("a string");
      return absl::OkStatus();
    case Kind::kBool:
      if (!value.is_boolean()) return bad("true or false");
      return absl::OkStatus();
    case Kind::kNumberList:
      if (value.is_number()) value = Json::array({value});
      if (!value.is_array()) return bad("a number or an array of numbers");
      for (const Json& v : value) {
        if (!v.is_number()) return bad("an array of numbers");
      }
      return absl::OkStatus();
  }
  return absl::OkStatus();
}

absl::Status CheckChoice(std::string_view key, const std::string& value,
                         const std::vector<std::string>& valid) {
  if (std::find(valid.begin(), valid.end(), value) != valid.end()) {
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      absl::StrCat("invalid ", std::string(key), " '", value,
                   "'; valid: ", absl::StrJoin(valid, ", ")));
}

absl::Status CheckPositive(std::string_view key, double value) {
  if (value > 0 && std::isfinite(value)) return absl::OkStatus();
  return absl::InvalidArgumentError(absl::StrCat(
      std::string(key), " must be positive and finite, got ", value));
}

absl::Status Validate(const ExperimentConfig& c) {
  if (absl::Status s = CheckChoice("command", c.command, ValidCommands());
      !s.ok()) {
    return s;
  }
  for (auto [key, value] :
       {std::pair<std::string_view, double>{"epsilon", c.epsilon},
        {"tol", c.tol},
        {"M", c.big_m},
        {"nu", c.nu},
        {"quantization", c.quantization}}) {
    if (absl::Status s = CheckPositive(key, value); !s.ok()) return s;
  }
  if (c.vmax) {
    if (absl::Status s = CheckPositive("vmax", *c.vmax); !s.ok()) return s;
  }
  if (!(c.alpha >= 0) || !std::isfinite(c.alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be non-negative and finite, got ", c.alpha));
  }
  for (auto [key, value] : {std::pair<std::string_view, std::optional<int>>{
                                "n", c.n},
                            {"m", c.m}}) {
    if (value && (*value < 1 || *value > 1000000)) {
      return absl::InvalidArgumentError(absl::StrCat(
          std::string(key), " must be in [1, 1000000], got ", *value));
    }
  }
  if (c.trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be at least 1, got ", c.trials));
  }
  for (double l : c.lambda) {
    if (!std::isfinite(l)) {
      return absl::InvalidArgumentError("lambda values must be finite");
    }
  }
  if (absl::Status s = CheckChoice("adjacency", c.adjacency,
                                   {"l1", "l2", "composite"});
      !s.ok()) {
    return s;
  }
  if (c.mechanism) {
    if (absl::Status s = CheckChoice("mechanism", *c.mechanism,
                                     ValidMechanisms());
        !s.ok()) {
      return s;
    }
  }
  if (absl::Status s = CheckChoice("density", c.density, ValidDensities());
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckChoice("audit", c.audit, ValidAudits()); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckChoice("mode", c.mode, {"1d", "radial"}); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckChoice("format", c.format, {"csv", "json"});
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckChoice("map", c.map, {"sign", "constant", "round"});
      !s.ok()) {
    return s;
  }
  if (c.schedule) {
    if (absl::StatusOr<std::vector<std::pair<double, double>>> s =
            ParseSchedule(*c.schedule);
        !s.ok()) {
      return s.status();
    }
  }
  return absl::OkStatus();
}

std::string DefaultFormat(const std::string& command) {
  return command == "privatize" || command == "dual" ? "csv" : "json";
}

}  // namespace

const std::vector<std::string>& ConfigKeys() {
  static const auto* keys = [] {
    auto* k = new std::vector<std::string>;
    for (const auto& [name, kind] : Schema()) k->push_back(name);
    return k;
  }();
  return *keys;
}

const std::vector<std::string>& ValidDensities() {
  static const auto* v = new std::vector<std::string>{
      "laplace1d", "l1", "l2", "composite", "staircase", "gaussian"};
  return *v;
}

const std::vector<std::string>& ValidAudits() {
  static const auto* v = new std::vector<std::string>{
      "lipschitz", "dp-ratio", "postprocess", "cdf", "gof"};
  return *v;
}

const std::vector<std::string>& ValidMechanisms() {
  static const auto* v =
      new std::vector<std::string>{"laplace1d", "l1", "l2", "composite"};
  return *v;
}

const std::vector<std::string>& ValidCommands() {
  static const auto* v =
      new std::vector<std::string>{"privatize", "mse", "audit", "dual", "lp"};
  return *v;
}

absl::StatusOr<ExperimentConfig> ResolveConfig(
    const std::string& command, const std::map<std::string, std::string>& cli,
    const std::optional<std::string>& config_path) {
  Json settings = Json::object();
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) {
      return absl::NotFoundError(
          absl::StrCat("cannot read config file '", *config_path, "'"));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    Json file = Json::parse(buffer.str(), nullptr, false);
    if (file.is_discarded() || !file.is_object()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config file '", *config_path, "' is not a flat JSON object"));
    }
    for (auto& [key, value] : file.items()) {
      std::optional<Kind> kind = KindOf(key);
      if (!kind) return UnknownKey(key, "config");
      Json v = value;
      if (absl::Status s = CheckJsonType(key, *kind, v); !s.ok()) return s;
      settings[key] = v;
    }
  }
  for (const auto& [key, text] : cli) {
    std::optional<Kind> kind = KindOf(key);
    if (!kind) return UnknownKey(key, "flag");
    absl::StatusOr<Json> v = FromCliString(key, *kind, text);
    if (!v.ok()) return v.status();
    settings[key] = *v;
  }

  ExperimentConfig c;
  c.command = command;
  const auto get = [&](const char* key) -> const Json* {
    auto it = settings.find(key);
    return it == settings.end() ? nullptr : &*it;
  };
  if (const Json* v = get("epsilon")) c.epsilon = v->get<double>();
  if (const Json* v = get("adjacency")) c.adjacency = v->get<std::string>();
  if (const Json* v = get("n")) {
    const int64_t x = v->get<int64_t>();
    c.n = static_cast<int>(std::clamp<int64_t>(x, -1, 2000000));
  }
  if (const Json* v = get("m")) {
    const int64_t x = v->get<int64_t>();
    c.m = static_cast<int>(std::clamp<int64_t>(x, -1, 2000000));
  }
  if (const Json* v = get("alpha")) c.alpha = v->get<double>();
  if (const Json* v = get("trials")) c.trials = v->get<int64_t>();
  if (const Json* v = get("lambda")) c.lambda = v->get<std::vector<double>>();
  if (const Json* v = get("bisect")) c.bisect = v->get<bool>();
  if (const Json* v = get("tol")) c.tol = v->get<double>();
  if (const Json* v = get("vmax")) c.vmax = v->get<double>();
  if (const Json* v = get("M")) c.big_m = v->get<double>();
  if (const Json* v = get("nu")) c.nu = v->get<double>();
  if (const Json* v = get("seed")) c.seed = v->get<uint64_t>();
  if (const Json* v = get("input")) c.input = v->get<std::string>();
  if (const Json* v = get("output")) c.output = v->get<std::string>();
  c.format = DefaultFormat(command);
  if (const Json* v = get("format")) c.format = v->get<std::string>();
  if (const Json* v = get("mechanism")) c.mechanism = v->get<std::string>();
  if (const Json* v = get("density")) c.density = v->get<std::string>();
  if (const Json* v = get("audit")) c.audit = v->get<std::string>();
  if (const Json* v = get("mode")) c.mode = v->get<std::string>();
  if (const Json* v = get("overlay")) c.overlay = v->get<bool>();
  if (const Json* v = get("schedule")) c.schedule = v->get<std::string>();
  if (const Json* v = get("quantization")) c.quantization = v->get<double>();
  if (const Json* v = get("map")) c.map = v->get<std::string>();
  if (absl::Status s = Validate(c); !s.ok()) return s;
  return c;
}

std::string CanonicalConfigJson(const ExperimentConfig& c) {
  Json j = Json::object();
  j["command"] = c.command;
  j["epsilon"] = c.epsilon;
  j["adjacency"] = c.adjacency;
  if (c.n) j["n"] = *c.n;
  if (c.m) j["m"] = *c.m;
  j["alpha"] = c.alpha;
  j["trials"] = c.trials;
  j["lambda"] = c.lambda;
  j["bisect"] = c.bisect;
  j["tol"] = c.tol;
  if (c.vmax) j["vmax"] = *c.vmax;
  j["M"] = c.big_m;
  j["nu"] = c.nu;
  j["seed"] = c.seed;
  if (c.input) j["input"] = *c.input;
  if (c.output) j["output"] = *c.output;
  j["format"] = c.format;
  if (c.mechanism) j["mechanism"] = *c.mechanism;
  j["density"] = c.density;
  j["audit"] = c.audit;
  j["mode"] = c.mode;
  j["overlay"] = c.overlay;
  if (c.schedule) j["schedule"] = *c.schedule;
  j["quantization"] = c.quantization;
  j["map"] = c.map;
  return j.dump();
}

std::string ConfigHash(const ExperimentConfig& config) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : CanonicalConfigJson(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

absl::StatusOr<std::vector<std::pair<double, double>>> ParseSchedule(
    const std::string& text) {
  std::vector<std::pair<double, double>> rows;
  if (text == "default") {
    return DefaultSchedule();
  }
  for (const std::string& item : std::vector<std::string>(absl::StrSplit(text, ','))) {
    std::vector<std::string> parts = absl::StrSplit(item, ':');
    std::optional<double> m, nu;
    if (parts.size() == 2) {
      m = ParseDouble(parts[0]);
      nu = ParseDouble(parts[1]);
    }
    if (!m || !nu || !(*m > 0) || !(*nu > 0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schedule entry '", std::string(item),
          "' is not M:nu with positive numbers (e.g. 4:0.2,6:0.1)"));
    }
    rows.emplace_back(*m, *nu);
  }
  return rows;
}

}  // namespace lipdp
