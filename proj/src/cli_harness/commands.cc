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

#include "lipdp/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "lipdp/audit.h"
#include "lipdp/csv.h"
#include "lipdp/dual.h"
#include "lipdp/format.h"
#include "lipdp/lp.h"
#include "lipdp/manifest.h"
#include "lipdp/mechanisms.h"
#include "lipdp/rng.h"

#ifndef LIPDP_VERSION
#define LIPDP_VERSION "dev"
#endif

namespace lipdp {
namespace {

using Json = nlohmann::ordered_json;

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("cannot read '", path, "'"));
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  out << data;
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("cannot write '", path, "'"));
  return absl::OkStatus();
}

// Seed handed to a library routine that builds its own streams.
uint64_t SubSeed(const ExperimentConfig& config, uint64_t stream) {
  return DeriveStreamSeed(config.seed, stream);
}

// Flattens a flat JSON object into "field,value" CSV rows.
std::string FlatJsonToCsv(const Json& j) {
  std::string out = "field,value\n";
  for (const auto& [key, value] : j.items()) {
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<std::string> parts;
      for (const auto& v : value) {
        parts.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
      text = absl::StrJoin(parts, ";");
    } else if (value.is_number_float()) {
      text = FormatDouble(value.get<double>());
    } else {
      text = value.dump();
    }
    CsvTable row;
    row.header = {key, text};
    out += WriteCsv(row);
  }
  return out;
}

absl::StatusOr<MechanismSpec> MechanismByName(const std::string& name,
                                              const ExperimentConfig& c) {
  absl::StatusOr<MechanismKind> kind = ParseMechanismKind(name);
  if (!kind.ok()) return kind.status();
  switch (*kind) {
    case MechanismKind::kLaplace1D:
      if (c.N() * c.Mdim() != 1) {
        return absl::InvalidArgumentError(
            "mechanism laplace1d needs n = m = 1");
      }
      return MechanismSpec::Laplace1D(c.epsilon);
    case MechanismKind::kProductL1:
      if (c.Mdim() != 1) {
        return absl::InvalidArgumentError("mechanism l1 needs m = 1");
      }
      return MechanismSpec::ProductL1(c.epsilon, c.N());
    case MechanismKind::kRadialL2:
      if (c.Mdim() != 1) {
        return absl::InvalidArgumentError("mechanism l2 needs m = 1");
      }
      return MechanismSpec::RadialL2(c.epsilon, c.N());
    case MechanismKind::kComposite:
      return MechanismSpec::Composite(c.epsilon, c.N(), c.Mdim());
  }
  return absl::InvalidArgumentError("unknown mechanism");
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
      return kExitConfig;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kUnavailable:
      return kExitIo;
    default:
      return kExitNumeric;
  }
}

absl::StatusOr<MechanismSpec> MechanismFromConfig(const ExperimentConfig& c) {
  if (c.mechanism) return MechanismByName(*c.mechanism, c);
  if (c.adjacency == "l1") {
    return MechanismByName(c.N() * c.Mdim() == 1 ? "laplace1d" : "l1", c);
  }
  return MechanismByName(c.adjacency, c);
}

absl::StatusOr<CommandOutput> RunPrivatize(const ExperimentConfig& c) {
  if (!c.input) return absl::InvalidArgumentError("privatize needs --input");
  if (c.format != "csv") {
    return absl::InvalidArgumentError("privatize writes CSV; use --format csv");
  }
  if (c.mechanism) {
    return absl::InvalidArgumentError(
        "privatize selects its mechanism with --adjacency, not --mechanism");
  }
  absl::StatusOr<std::string> text = ReadFile(*c.input);
  if (!text.ok()) return text.status();
  absl::StatusOr<CsvTable> table = ParseCsv(*text);
  if (!table.ok()) return table.status();
  absl::StatusOr<NumericView> view = ExtractNumeric(*table);
  if (!view.ok()) return view.status();
  if ((c.n && *c.n != view->users) || (c.m && *c.m != view->dims)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: input has ", view->users, " users x ",
        view->dims, " dims, config says n = ", c.N(), ", m = ", c.Mdim()));
  }
  ExperimentConfig sized = c;
  sized.n = view->users;
  sized.m = view->dims;
  absl::StatusOr<MechanismSpec> spec = [&]() -> absl::StatusOr<MechanismSpec> {
    const int total = view->users * view->dims;
    if (c.adjacency == "composite") {
      return MechanismSpec::Composite(c.epsilon, view->users, view->dims);
    }
    if (c.adjacency == "l2") return MechanismSpec::RadialL2(c.epsilon, total);
    return total == 1 ? MechanismSpec::Laplace1D(c.epsilon)
                      : MechanismSpec::ProductL1(c.epsilon, total);
  }();
  if (!spec.ok()) return spec.status();
  Rng rng(c.seed, kPrivatizeStream);
  const NoiseVector noise = Sample(*spec, rng);
  std::vector<double> values = view->values;
  for (size_t i = 0; i < values.size(); ++i) values[i] += noise[i];
  ReplaceNumeric(*view, values, *table);

  CommandOutput out;
  out.primary = WriteCsv(*table);
  out.manifest_values["epsilon"] = c.epsilon;
  out.manifest_values["n"] = view->users;
  out.manifest_values["m"] = view->dims;
  out.manifest_values["theoretical_mse"] = TheoreticalMse(*spec);
  return out;
}

absl::StatusOr<CommandOutput> RunMse(const ExperimentConfig& c) {
  if (c.trials < 1000) {
    return absl::InvalidArgumentError(
        absl::StrCat("mse needs --trials >= 1000, got ", c.trials));
  }
  absl::StatusOr<MechanismSpec> spec = MechanismFromConfig(c);
  if (!spec.ok()) return spec.status();
  Rng rng(c.seed, kMseStream);
  absl::StatusOr<MeanEstimate> est = EmpiricalMse(*spec, c.trials, rng);
  if (!est.ok()) return est.status();
  const double theory = TheoreticalMse(*spec);
  Json j;
  j["mechanism"] = std::string(MechanismKindName(spec->kind()));
  j["epsilon"] = spec->epsilon();
  j["n"] = spec->params().n;
  j["m"] = spec->params().m;
  j["trials"] = c.trials;
  j["estimate"] = est->mean;
  j["standard_error"] = est->standard_error;
  j["theory"] = theory;
  j["z_score"] = (est->mean - theory) / est->standard_error;
  CommandOutput out;
  out.primary = c.format == "json" ? j.dump(2) + "\n" : FlatJsonToCsv(j);
  out.manifest_values["theoretical_mse"] = theory;
  return out;
}

absl::StatusOr<CommandOutput> RunAudit(const ExperimentConfig& c) {
  const uint64_t seed = SubSeed(c, kAuditStream);
  Rng rng(c.seed, kAuditStream);
  const std::string subject = c.mechanism.value_or(c.density);
  const bool is_mechanism =
      std::find(ValidMechanisms().begin(), ValidMechanisms().end(), subject) !=
      ValidMechanisms().end();
  const auto need_mechanism = [&]() -> absl::StatusOr<MechanismSpec> {
    if (!is_mechanism) {
      return absl::InvalidArgumentError(absl::StrCat(
          "audit '", c.audit, "' needs a mechanism; valid: ",
          absl::StrJoin(ValidMechanisms(), ", ")));
    }
    return MechanismByName(subject, c);
  };

  absl::StatusOr<AuditReport> report;
  if (c.audit == "lipschitz") {
    DensityModel model;
    LipschitzProbeOptions opts;
    if (subject == "staircase") {
      absl::StatusOr<StaircaseControl> stairs =
          StaircaseControl::Create(c.epsilon, c.quantization);
      if (!stairs.ok()) return stairs.status();
      model = stairs->Model();
      opts.radius = 40.0 / c.epsilon;
      opts.spacing = 0.1 / c.epsilon;
    } else if (subject == "gaussian") {
      model = GaussianDensity(c.N(), c.epsilon);
      opts.norm = c.N() == 1 ? LipschitzNorm::kL1 : LipschitzNorm::kL2;
      opts.radius = 40.0 / c.epsilon;
      opts.spacing = 0.1 / c.epsilon;
    } else {
      absl::StatusOr<MechanismSpec> spec = need_mechanism();
      if (!spec.ok()) return spec.status();
      model = MechanismDensity(*spec);
      opts = DefaultProbeOptions(*spec);
    }
    opts.seed = seed;
    report = AuditLipschitz(model, c.epsilon, opts);
  } else if (c.audit == "dp-ratio") {
    absl::StatusOr<MechanismSpec> spec = need_mechanism();
    if (!spec.ok()) return spec.status();
    DpRatioOptions opts;
    opts.alpha = c.alpha;
    opts.trials = c.trials;
    opts.seed = seed;
    report = AuditDpRatio(*spec, opts);
  } else if (c.audit == "postprocess") {
    absl::StatusOr<MechanismSpec> spec = need_mechanism();
    if (!spec.ok()) return spec.status();
    PostProcessMap map = c.map == "sign"       ? SignMap()
                         : c.map == "constant" ? ConstantMap()
                                               : RoundingMap(10);
    PostProcessOptions opts;
    opts.alpha = c.alpha;
    opts.trials = c.trials;
    opts.seed = seed;
    report = AuditPostProcessing(*spec, map, opts);
  } else if (c.audit == "cdf") {
    absl::StatusOr<Grid1D> probes = Grid1D::Create(-5.0, 5.0, 0.1);
    if (!probes.ok()) return probes.status();
    if (subject == "staircase") {
      absl::StatusOr<StaircaseControl> stairs =
          StaircaseControl::Create(c.epsilon, c.quantization);
      if (!stairs.ok()) return stairs.status();
      report = AuditCdfLipschitz(*stairs, *probes, c.trials, rng);
    } else {
      absl::StatusOr<MechanismSpec> spec = need_mechanism();
      if (!spec.ok()) return spec.status();
      report = AuditCdfLipschitz(*spec, *probes, c.trials, rng);
    }
  } else {
    absl::StatusOr<MechanismSpec> spec = need_mechanism();
    if (!spec.ok()) return spec.status();
    if (spec->BlockCount() != 1) {
      return absl::InvalidArgumentError(
          "gof audit needs a single radial block (l2, laplace1d, or "
          "composite with n = 1)");
    }
    std::vector<NoiseVector> samples;
    samples.reserve(c.trials);
    for (int64_t t = 0; t < c.trials; ++t) samples.push_back(Sample(*spec, rng));
    report = AuditRadialGof(samples, spec->Dimension(), c.epsilon);
  }
  if (!report.ok()) return report.status();
  CommandOutput out;
  const std::string json = AuditReportToJson(*report);
  out.primary =
      c.format == "json" ? json + "\n" : FlatJsonToCsv(Json::parse(json));
  return out;
}

absl::StatusOr<CommandOutput> RunDual(const ExperimentConfig& c) {
  if (c.lambda.empty() && !c.bisect) {
    return absl::InvalidArgumentError("dual needs --lambda values or --bisect");
  }
  const bool radial = c.mode == "radial";
  const int n = radial ? c.N() : 1;
  if (!radial && c.n && *c.n != 1) {
    return absl::InvalidArgumentError("mode 1d needs n = 1; use --mode radial");
  }
  const DualProblem problem = radial ? DualProblem::Radial(n) : DualProblem::OneD();
  const double horizon = c.vmax.value_or(DefaultHorizon(n, c.epsilon));
  constexpr double kIntegrationTol = 1e-10;

  CommandOutput out;
  Json summary;
  summary["mode"] = c.mode;
  summary["n"] = n;
  summary["epsilon"] = c.epsilon;
  summary["horizon"] = horizon;
  summary["lambda_star_theory"] = TheoreticalLambdaStar(n, c.epsilon);
  summary["trajectories"] = Json::array();
  std::string stacked;
  std::vector<std::string> inconclusive;
  for (size_t k = 0; k < c.lambda.size(); ++k) {
    const double lambda = c.lambda[k];
    absl::StatusOr<DualTrajectory> traj =
        radial && n > 1
            ? IntegrateDualRadial(lambda, c.epsilon, n, horizon, kIntegrationTol)
            : IntegrateDual1D(lambda, c.epsilon, horizon, kIntegrationTol);
    if (!traj.ok()) return traj.status();
    const std::string csv = DualTrajectoryCsv(*traj, c.overlay);
    out.extra_files.emplace_back(absl::StrCat(".lambda_", k, ".csv"), csv);
    // Stacked long table: the lambda value prefixes every row.
    std::istringstream lines(csv);
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
      if (header) {
        if (k == 0) stacked += "lambda," + line + "\n";
        header = false;
        continue;
      }
      absl::StrAppend(&stacked, FormatDouble(lambda), ",", line, "\n");
    }
    Json t;
    t["lambda"] = lambda;
    t["verdict"] = std::string(FeasibilityVerdictName(traj->verdict));
    const auto opt = [](const std::optional<double>& v) {
      return v ? Json(*v) : Json(nullptr);
    };
    t["inflection"] = opt(traj->breakpoints.inflection);
    t["stationary"] = opt(traj->breakpoints.stationary);
    t["crossing"] = opt(traj->breakpoints.crossing);
    t["end"] = traj->grid.back();
    t["eta_end"] = traj->eta.back();
    t["points"] = traj->grid.size();
    t["diagnostics"] = traj->diagnostics;
    summary["trajectories"].push_back(t);
    if (traj->verdict == FeasibilityVerdict::kInconclusive) {
      inconclusive.push_back(FormatDouble(lambda));
    }
  }
  if (c.bisect) {
    absl::StatusOr<CertificateResult> cert =
        BisectLambdaStar(problem, c.epsilon, c.tol, horizon);
    if (!cert.ok()) return cert.status();
    summary["certificate"] =
        Json::parse(CertificateJson(problem, c.epsilon, c.tol, *cert));
    out.manifest_values["lambda_star_estimate"] = cert->lambda_star_estimate;
  }
  const std::string summary_text = summary.dump(2) + "\n";
  if (c.format == "json" || c.lambda.empty()) {
    out.primary = summary_text;
  } else {
    out.primary = stacked;
    out.extra_files.emplace_back(".summary.json", summary_text);
  }
  out.manifest_values["lambda_star_theory"] = TheoreticalLambdaStar(n, c.epsilon);
  if (!inconclusive.empty()) {
    out.exit_code = kExitNumeric;
    out.message = absl::StrCat("Inconclusive verdict for lambda = ",
                               absl::StrJoin(inconclusive, ", "),
                               "; raise --vmax (currently ", horizon, ")");
  }
  return out;
}

absl::StatusOr<CommandOutput> RunLp(const ExperimentConfig& c) {
  absl::StatusOr<LpInstance> inst = BuildPrimal(c.epsilon, c.big_m, c.nu);
  if (!inst.ok()) return inst.status();
  if (inst->n > 20001) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid of ", inst->n, " points exceeds the 20001-point limit"));
  }
  absl::StatusOr<LpSolution> sol = Solve(*inst);
  if (!sol.ok()) return sol.status();
  CommandOutput out;
  Json j;
  if (sol->status == LpStatus::kOptimal) {
    absl::StatusOr<DualityGapReport> rep = MakeDualityGapReport(*inst, *sol);
    if (!rep.ok()) return rep.status();
    j = Json::parse(LpSolutionJson(*inst, *sol, *rep));
  } else {
    j["status"] = std::string(LpStatusName(sol->status));
    j["primal_objective"] = sol->primal_objective;
    j["dual_objective"] = sol->dual_objective;
    out.exit_code = kExitNumeric;
    out.message = absl::StrCat("LP solve ended with status ",
                               std::string(LpStatusName(sol->status)));
  }
  if (c.schedule) {
    absl::StatusOr<std::vector<std::pair<double, double>>> schedule =
        ParseSchedule(*c.schedule);
    if (!schedule.ok()) return schedule.status();
    absl::StatusOr<std::vector<ConvergenceRow>> rows =
        ConvergenceStudy(c.epsilon, *schedule);
    if (!rows.ok()) return rows.status();
    Json table = Json::array();
    bool monotone = true;
    for (size_t i = 0; i < rows->size(); ++i) {
      const ConvergenceRow& r = (*rows)[i];
      Json row;
      row["M"] = r.m;
      row["nu"] = r.nu;
      row["N"] = r.n;
      row["status"] = std::string(LpStatusName(r.status));
      row["optimum"] = r.optimum;
      row["abs_error"] = r.abs_error;
      row["rel_error"] = r.rel_error;
      row["flagged"] = r.flagged;
      table.push_back(row);
      if (i > 0 && !(r.abs_error < (*rows)[i - 1].abs_error)) monotone = false;
    }
    j["convergence"] = table;
    j["convergence_monotone"] = monotone;
    out.extra_files.emplace_back(".convergence.csv", ConvergenceCsv(*rows));
  }
  const std::string solution_csv = LpSolutionCsv(*inst, *sol);
  const std::string json = j.dump(2) + "\n";
  if (c.format == "json") {
    out.primary = json;
    out.extra_files.emplace_back(".solution.csv", solution_csv);
  } else {
    out.primary = solution_csv;
    out.extra_files.emplace_back(".summary.json", json);
  }
  out.manifest_values["primal_objective"] = sol->primal_objective;
  out.manifest_values["theory"] = 2.0 / (c.epsilon * c.epsilon);
  return out;
}

int RunCommand(const ExperimentConfig& config, std::ostream& out,
               std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<CommandOutput> result;
  if (config.command == "privatize") {
    result = RunPrivatize(config);
  } else if (config.command == "mse") {
    result = RunMse(config);
  } else if (config.command == "audit") {
    result = RunAudit(config);
  } else if (config.command == "dual") {
    result = RunDual(config);
  } else if (config.command == "lp") {
    result = RunLp(config);
  } else {
    result = absl::InvalidArgumentError(
        absl::StrCat("unknown command '", config.command, "'"));
  }
  if (!result.ok()) {
    err << "error: " << result.status().message() << "\n";
    return ExitCodeFor(result.status());
  }
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Manifest manifest;
  manifest.version = LIPDP_VERSION;
  manifest.rng_version = std::string(kRngVersion);
  manifest.command = config.command;
  manifest.seed = config.seed;
  manifest.config_hash = ConfigHash(config);
  manifest.config = CanonicalConfigJson(config);
  manifest.wall_time_seconds = wall;
  manifest.values = result->manifest_values;
  const std::string manifest_json = ManifestToJson(manifest) + "\n";

  if (config.output) {
    absl::Status s = WriteFile(*config.output, result->primary);
    for (const auto& [suffix, data] : result->extra_files) {
      if (s.ok()) s = WriteFile(*config.output + suffix, data);
    }
    if (s.ok()) s = WriteFile(*config.output + ".manifest.json", manifest_json);
    if (!s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitIo;
    }
  } else {
    out << result->primary;
    out.flush();
    err << manifest_json;
  }
  if (!result->message.empty()) err << "warning: " << result->message << "\n";
  return result->exit_code;
}

}  // namespace lipdp
