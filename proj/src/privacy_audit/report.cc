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

#include <string>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "lipdp/audit.h"

namespace lipdp {
namespace {

constexpr std::string_view kGofPrefix = "gof_";
constexpr std::string_view kStatisticSuffix = "_statistic";
constexpr std::string_view kThresholdSuffix = "_threshold";

absl::StatusOr<Verdict> ParseVerdict(std::string_view name) {
  for (Verdict v : {Verdict::kPass, Verdict::kFail, Verdict::kDivergent}) {
    if (VerdictName(v) == name) return v;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown verdict '", std::string(name), "'"));
}

}  // namespace

std::string AuditReportToJson(const AuditReport& report) {
  nlohmann::ordered_json j;
  j["audit"] = report.audit;
  j["subject"] = report.subject;
  j["verdict"] = std::string(VerdictName(report.verdict));
  if (report.lipschitz_estimate.has_value()) {
    j["lipschitz_estimate"] = *report.lipschitz_estimate;
  } else {
    j["lipschitz_estimate"] = nullptr;
  }
  j["divergent"] = report.verdict == Verdict::kDivergent;
  j["target_eps"] = report.target_eps;
  j["tolerance"] = report.tolerance;
  j["dp_ratio_max"] = report.dp_ratio_max;
  j["statistical_slack"] = report.statistical_slack;
  for (const auto& [name, gof] : report.gof_statistics) {
    j[std::string(kGofPrefix) + name + std::string(kStatisticSuffix)] = gof.statistic;
    j[std::string(kGofPrefix) + name + std::string(kThresholdSuffix)] = gof.threshold;
  }
  j["refinement_trend"] = report.refinement_trend;
  j["range_trend"] = report.range_trend;
  j["skipped"] = report.skipped;
  j["notes"] = report.notes;
  return j.dump(2);
}

absl::StatusOr<AuditReport> AuditReportFromJson(std::string_view text) {
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("audit report is not a JSON object");
  }
  AuditReport report;
  try {
    report.audit = j.at("audit").get<std::string>();
    report.subject = j.at("subject").get<std::string>();
    absl::StatusOr<Verdict> verdict =
        ParseVerdict(j.at("verdict").get<std::string>());
    if (!verdict.ok()) return verdict.status();
    report.verdict = *verdict;
    if (!j.at("lipschitz_estimate").is_null()) {
      report.lipschitz_estimate = j.at("lipschitz_estimate").get<double>();
    }
    report.target_eps = j.at("target_eps").get<double>();
    report.tolerance = j.at("tolerance").get<double>();
    report.dp_ratio_max = j.at("dp_ratio_max").get<double>();
    report.statistical_slack = j.at("statistical_slack").get<double>();
    report.refinement_trend = j.at("refinement_trend").get<std::vector<double>>();
    report.range_trend = j.at("range_trend").get<std::vector<double>>();
    report.skipped = j.at("skipped").get<int>();
    report.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& [key, value] : j.items()) {
      if (!std::string_view(key).starts_with(kGofPrefix)) continue;
      std::string_view rest = std::string_view(key).substr(kGofPrefix.size());
      if (rest.ends_with(kStatisticSuffix)) {
        rest.remove_suffix(kStatisticSuffix.size());
        report.gof_statistics[std::string(rest)].statistic = value.get<double>();
      } else if (rest.ends_with(kThresholdSuffix)) {
        rest.remove_suffix(kThresholdSuffix.size());
        report.gof_statistics[std::string(rest)].threshold = value.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed audit report: ", e.what()));
  }
  return report;
}

}  // namespace lipdp
