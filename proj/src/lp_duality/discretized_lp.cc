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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "lipdp/format.h"
#include "lipdp/lp.h"

namespace lipdp {
namespace {

// A'w restricted to the g columns, with w = (kappa_0, mu_0, kappa_1, ...).
std::vector<double> TransposeTimes(const LpInstance& instance,
                                   const std::vector<double>& kappa,
                                   const std::vector<double>& mu) {
  std::vector<double> out(instance.n, 0.0);
  for (int r = 0; r < instance.InequalityCount(); ++r) {
    const double w = r % 2 == 0 ? kappa[r / 2] : mu[r / 2];
    for (const auto& [col, coeff] : instance.inequality_rows[r]) {
      out[col] += coeff * w;
    }
  }
  return out;
}

}  // namespace

absl::StatusOr<LpInstance> BuildPrimal(double eps, double m, double nu) {
  for (auto [name, value] : {std::pair{"eps", eps}, {"M", m}, {"nu", nu}}) {
    if (!(value > 0) || !std::isfinite(value)) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " must be positive and finite, got ", value));
    }
  }
  const double intervals = 2.0 * m / nu;
  const double rounded = std::round(intervals);
  if (rounded < 1 || std::abs(intervals - rounded) > 1e-9 * intervals) {
    return absl::InvalidArgumentError(absl::StrCat(
        "2M/nu = ", intervals, " is not an integer (M = ", m, ", nu = ", nu,
        ")"));
  }
  if (rounded > 1e6) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid of ", rounded + 1, " points is too large"));
  }
  LpInstance inst;
  inst.eps = eps;
  inst.m = m;
  inst.nu = nu;
  inst.n = static_cast<int>(rounded) + 1;
  inst.grid.resize(inst.n);
  inst.objective.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    // Mirror the right half so the grid is exactly symmetric.
    const int j = std::min(i, inst.n - 1 - i);
    const double v = -m + j * nu;
    inst.grid[i] = i == j ? v : -v;
    inst.objective[i] = inst.grid[i] * inst.grid[i] * nu;
  }
  const double diff = 1.0 / nu, avg = eps / 2.0;
  for (int i = 0; i + 1 < inst.n; ++i) {
    // (g_{i+1} - g_i)/nu - eps (g_i + g_{i+1})/2 <= 0
    inst.inequality_rows.push_back({{i, -diff - avg}, {i + 1, diff - avg}});
    // (g_i - g_{i+1})/nu - eps (g_i + g_{i+1})/2 <= 0
    inst.inequality_rows.push_back({{i, diff - avg}, {i + 1, -diff - avg}});
  }
  return inst;
}

absl::StatusOr<LpSolution> Solve(const LpInstance& instance,
                                 const IpmOptions& options) {
  const int n = instance.n;
  const int k = instance.InequalityCount();
  // Columns: g (n), then one slack per inequality row.
  StandardFormLp lp;
  lp.a.resize(1 + k, n + k);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < n; ++i) triplets.emplace_back(0, i, instance.nu);
  for (int r = 0; r < k; ++r) {
    for (const auto& [col, coeff] : instance.inequality_rows[r]) {
      triplets.emplace_back(1 + r, col, coeff);
    }
    triplets.emplace_back(1 + r, n + r, 1.0);
  }
  lp.a.setFromTriplets(triplets.begin(), triplets.end());
  lp.b = Eigen::VectorXd::Zero(1 + k);
  lp.b[0] = 1.0;
  lp.c = Eigen::VectorXd::Zero(n + k);
  for (int i = 0; i < n; ++i) lp.c[i] = instance.objective[i];

  absl::StatusOr<IpmResult> ipm = SolveInteriorPoint(lp, options);
  if (!ipm.ok()) return ipm.status();
  LpSolution sol;
  sol.status = ipm->status;
  sol.g.assign(ipm->x.data(), ipm->x.data() + n);
  sol.primal_objective = ipm->primal_objective;
  sol.lambda = ipm->y[0];
  sol.kappa.resize(k / 2);
  sol.mu.resize(k / 2);
  for (int r = 0; r < k; ++r) {
    // The slack column gives y_r <= 0; kappa and mu store -y_r.
    const double w = std::max(0.0, -ipm->y[1 + r]);
    (r % 2 == 0 ? sol.kappa : sol.mu)[r / 2] = w;
  }
  sol.dual_objective = ipm->dual_objective;
  sol.gap = sol.primal_objective - sol.dual_objective;
  sol.primal_residual = ipm->primal_residual;
  sol.dual_residual = ipm->dual_residual;
  sol.iterations = ipm->iterations;
  return sol;
}

PrimalResiduals CheckPrimal(const LpInstance& instance,
                            const std::vector<double>& g) {
  PrimalResiduals res;
  res.max_inequality = -std::numeric_limits<double>::infinity();
  for (const auto& row : instance.inequality_rows) {
    double lhs = 0.0;
    for (const auto& [col, coeff] : row) lhs += coeff * g[col];
    res.max_inequality = std::max(res.max_inequality, lhs);
  }
  double mass = 0.0;
  for (double x : g) mass += x * instance.nu;
  res.normalization = mass - 1.0;
  res.min_value = *std::min_element(g.begin(), g.end());
  return res;
}

double DualViolation(const LpInstance& instance, double lambda,
                     const std::vector<double>& kappa,
                     const std::vector<double>& mu) {
  const std::vector<double> atw = TransposeTimes(instance, kappa, mu);
  double worst = 0.0;
  for (int i = 0; i < instance.n; ++i) {
    worst = std::max(worst,
                     lambda * instance.nu - instance.objective[i] - atw[i]);
  }
  for (double w : kappa) worst = std::max(worst, -w);
  for (double w : mu) worst = std::max(worst, -w);
  return worst;
}

double CertifiedLowerBound(const LpInstance& instance,
                           const std::vector<double>& kappa,
                           const std::vector<double>& mu) {
  std::vector<double> k(kappa), m(mu);
  for (double& w : k) w = std::max(0.0, w);
  for (double& w : m) w = std::max(0.0, w);
  const std::vector<double> atw = TransposeTimes(instance, k, m);
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instance.n; ++i) {
    bound = std::min(bound, (instance.objective[i] + atw[i]) / instance.nu);
  }
  return bound;
}

absl::StatusOr<DualityGapReport> MakeDualityGapReport(
    const LpInstance& instance, const LpSolution& solution,
    std::optional<double> lambda) {
  if (solution.status != LpStatus::kOptimal) {
    return absl::FailedPreconditionError(absl::StrCat(
        "duality report needs an Optimal solution, got ",
        std::string(LpStatusName(solution.status))));
  }
  DualityGapReport rep;
  rep.gap = solution.gap;
  rep.relative_gap =
      std::abs(solution.gap) / (1.0 + std::abs(solution.primal_objective));
  for (size_t i = 0; i < solution.kappa.size(); ++i) {
    rep.pair_slackness =
        std::max(rep.pair_slackness, std::min(solution.kappa[i], solution.mu[i]));
  }
  const std::vector<double> atw =
      TransposeTimes(instance, solution.kappa, solution.mu);
  for (int i = 0; i < instance.n; ++i) {
    const double reduced =
        instance.objective[i] + atw[i] - solution.lambda * instance.nu;
    rep.complementarity =
        std::max(rep.complementarity, std::abs(solution.g[i] * reduced));
  }
  for (int r = 0; r < instance.InequalityCount(); ++r) {
    double slack = 0.0;
    for (const auto& [col, coeff] : instance.inequality_rows[r]) {
      slack -= coeff * solution.g[col];
    }
    const double w = r % 2 == 0 ? solution.kappa[r / 2] : solution.mu[r / 2];
    rep.complementarity = std::max(rep.complementarity, std::abs(w * slack));
  }
  rep.certified_lower_bound =
      CertifiedLowerBound(instance, solution.kappa, solution.mu);
  rep.dual_violation = DualViolation(
      instance, lambda.value_or(solution.lambda), solution.kappa, solution.mu);
  // The certificate is judged on the scale of the objective coefficients.
  rep.certificate_feasible =
      rep.dual_violation <= 1e-7 * (1.0 + std::abs(solution.lambda)) * instance.nu;
  return rep;
}

std::vector<double> GridLaplaceVector(const LpInstance& instance) {
  std::vector<double> g(instance.n);
  double mass = 0.0;
  for (int i = 0; i < instance.n; ++i) {
    g[i] = std::exp(-instance.eps * std::abs(instance.grid[i]));
    mass += g[i] * instance.nu;
  }
  for (double& x : g) x /= mass;
  return g;
}

std::vector<std::pair<double, double>> DefaultSchedule() {
  return {{4.0, 0.2}, {6.0, 0.1}, {8.0, 0.05}, {10.0, 0.025}};
}

absl::StatusOr<std::vector<ConvergenceRow>> ConvergenceStudy(
    double eps, const std::vector<std::pair<double, double>>& schedule,
    const IpmOptions& options) {
  if (schedule.empty()) {
    return absl::InvalidArgumentError("convergence schedule is empty");
  }
  const double target = 2.0 / (eps * eps);
  std::vector<ConvergenceRow> rows;
  for (const auto& [m, nu] : schedule) {
    absl::StatusOr<LpInstance> inst = BuildPrimal(eps, m, nu);
    if (!inst.ok()) return inst.status();
    absl::StatusOr<LpSolution> sol = Solve(*inst, options);
    if (!sol.ok()) return sol.status();
    ConvergenceRow row;
    row.m = m;
    row.nu = nu;
    row.n = inst->n;
    row.status = sol->status;
    row.optimum = sol->primal_objective;
    row.gap = sol->gap;
    row.abs_error = std::abs(row.optimum - target);
    row.rel_error = row.abs_error / target;
    row.flagged = sol->status != LpStatus::kOptimal;
    rows.push_back(row);
  }
  return rows;
}

std::string LpSolutionCsv(const LpInstance& instance,
                          const LpSolution& solution) {
  const std::vector<double> laplace = GridLaplaceVector(instance);
  std::string out = "i,v,g,laplace_grid\n";
  for (int i = 0; i < instance.n; ++i) {
    absl::StrAppend(&out, i, ",", FormatDouble(instance.grid[i]), ",",
                    FormatDouble(solution.g[i]), ",", FormatDouble(laplace[i]),
                    "\n");
  }
  return out;
}

std::string LpSolutionJson(const LpInstance& instance,
                           const LpSolution& solution,
                           const DualityGapReport& report) {
  nlohmann::ordered_json j;
  j["eps"] = instance.eps;
  j["M"] = instance.m;
  j["nu"] = instance.nu;
  j["N"] = instance.n;
  j["status"] = std::string(LpStatusName(solution.status));
  j["primal_objective"] = solution.primal_objective;
  j["dual_objective"] = solution.dual_objective;
  j["lambda"] = solution.lambda;
  j["gap"] = report.gap;
  j["relative_gap"] = report.relative_gap;
  j["certified_lower_bound"] = report.certified_lower_bound;
  j["pair_slackness"] = report.pair_slackness;
  j["complementarity"] = report.complementarity;
  j["primal_residual"] = solution.primal_residual;
  j["dual_residual"] = solution.dual_residual;
  j["iterations"] = solution.iterations;
  j["theory"] = 2.0 / (instance.eps * instance.eps);
  return j.dump(2);
}

std::string ConvergenceCsv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "M,nu,N,status,optimum,gap,abs_error,rel_error,flagged\n";
  for (const ConvergenceRow& r : rows) {
    absl::StrAppend(&out, FormatDouble(r.m), ",", FormatDouble(r.nu), ",", r.n,
                    ",", std::string(LpStatusName(r.status)), ",",
                    FormatDouble(r.optimum), ",", FormatDouble(r.gap), ",",
                    FormatDouble(r.abs_error), ",", FormatDouble(r.rel_error),
                    ",", r.flagged ? 1 : 0, "\n");
  }
  return out;
}

}  // namespace lipdp
