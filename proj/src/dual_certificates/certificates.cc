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
#include "lipdp/dual.h"

namespace lipdp {
namespace {

// Integration tolerance used by certificate runs.
constexpr double kCertificateTol = 1e-10;

absl::StatusOr<DualTrajectory> IntegrateProblem(const DualProblem& problem,
                                                double lambda, double eps,
                                                double horizon) {
  if (problem.radial && problem.n > 1) {
    return IntegrateDualRadial(lambda, eps, problem.n, horizon,
                               kCertificateTol);
  }
  return IntegrateDual1D(lambda, eps, horizon, kCertificateTol);
}

// Classifies lambda, doubling the horizon on Inconclusive up to three times.
absl::StatusOr<FeasibilityVerdict> Decide(const DualProblem& problem,
                                          double lambda, double eps,
                                          double horizon) {
  std::string last_diagnostics;
  for (int attempt = 0; attempt < 4; ++attempt, horizon *= 2.0) {
    absl::StatusOr<DualTrajectory> traj =
        IntegrateProblem(problem, lambda, eps, horizon);
    if (!traj.ok()) return traj.status();
    if (traj->verdict != FeasibilityVerdict::kInconclusive) {
      return traj->verdict;
    }
    last_diagnostics = traj->diagnostics;
  }
  return absl::FailedPreconditionError(absl::StrCat(
      "lambda = ", lambda, " stays Inconclusive up to horizon ", horizon / 2.0,
      " (", last_diagnostics, "); raise v_max"));
}

}  // namespace

std::string DualProblem::Name() const {
  return radial ? absl::StrCat("radial_n", n) : "1d";
}

absl::StatusOr<CertificateResult> BisectLambdaStar(
    const DualProblem& problem, double eps, double tol,
    std::optional<double> horizon) {
  if (!(tol > 0)) return absl::InvalidArgumentError("tol must be positive");
  if (!(eps > 0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError("eps must be positive and finite");
  }
  if (problem.n < 1) return absl::InvalidArgumentError("n must be >= 1");
  const int n = problem.radial ? problem.n : 1;
  CertificateResult result;
  result.lambda_star_theory = TheoreticalLambdaStar(n, eps);
  result.horizon = horizon.value_or(DefaultHorizon(n, eps));
  double lo = 0.0;
  double hi = 4.0 * result.lambda_star_theory;
  for (double end : {lo, hi}) {
    absl::StatusOr<FeasibilityVerdict> v =
        Decide(problem, end, eps, result.horizon);
    if (!v.ok()) return v.status();
    const FeasibilityVerdict expected = end == lo
                                            ? FeasibilityVerdict::kFeasible
                                            : FeasibilityVerdict::kInfeasible;
    if (*v != expected) {
      return absl::FailedPreconditionError(absl::StrCat(
          "initial bracket end lambda = ", end, " classified ",
          std::string(FeasibilityVerdictName(*v))));
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<FeasibilityVerdict> v =
        Decide(problem, mid, eps, result.horizon);
    if (!v.ok()) return v.status();
    ++result.iterations;
    if (*v == FeasibilityVerdict::kFeasible) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  result.lambda_star_estimate = 0.5 * (lo + hi);
  return result;
}

std::string CertificateJson(const DualProblem& problem, double eps, double tol,
                            const CertificateResult& result) {
  nlohmann::ordered_json j;
  j["problem"] = problem.Name();
  j["eps"] = eps;
  j["tol"] = tol;
  j["lambda_star_estimate"] = result.lambda_star_estimate;
  j["lambda_star_theory"] = result.lambda_star_theory;
  j["bracket_lo"] = result.bracket_lo;
  j["bracket_hi"] = result.bracket_hi;
  j["iterations"] = result.iterations;
  j["horizon"] = result.horizon;
  j["abs_error"] =
      std::abs(result.lambda_star_estimate - result.lambda_star_theory);
  return j.dump(2);
}

absl::StatusOr<double> ClosedFormDualResidual(const DualProblem& problem,
                                              double eps,
                                              std::span<const double> grid,
                                              std::optional<double> lambda) {
  if (!(eps > 0)) return absl::InvalidArgumentError("eps must be positive");
  if (grid.empty()) return absl::InvalidArgumentError("grid is empty");
  const int n = problem.radial ? problem.n : 1;
  const double lam = lambda.value_or(TheoreticalLambdaStar(n, eps));
  const double eps2 = eps * eps;
  double worst = 0.0;
  for (double r : grid) {
    if (n > 1 && !(r > 0)) {
      return absl::InvalidArgumentError(
          "radial grid must exclude r <= 0 when n > 1");
    }
    const double eta = ClosedFormEta(n, eps, r);
    const double deta = -(2.0 * eps * std::abs(r) + n + 1) / eps2;
    double lhs = deta + eps * std::abs(eta);
    if (n > 1) lhs += (n - 1) * eta / r;
    worst = std::max(worst, std::abs(lhs - (r * r - lam)));
  }
  return worst;
}

absl::StatusOr<SeparableDualReport> VerifySeparableDual(
    SeparableKind kind, int n, int m, double eps, double lambda_block,
    std::span<const double> axis) {
  if (n < 1 || m < 1) return absl::InvalidArgumentError("n, m must be >= 1");
  if (kind == SeparableKind::kL1) m = 1;
  if (axis.empty()) return absl::InvalidArgumentError("axis grid is empty");
  const double points = std::pow(static_cast<double>(axis.size()), n);
  if (points > 4e6) {
    return absl::InvalidArgumentError(
        absl::StrCat("tensor grid has ", points, " points; limit is 4e6"));
  }
  SeparableDualReport report;
  report.block_lambda_star = TheoreticalLambdaStar(m, eps);
  if (!(lambda_block < report.block_lambda_star)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "lambda_block must be below the block optimum ",
        report.block_lambda_star, ", got ", lambda_block));
  }
  const double horizon = DefaultHorizon(m, eps);
  absl::StatusOr<DualTrajectory> block =
      m == 1 ? IntegrateDual1D(lambda_block, eps, horizon, kCertificateTol)
             : IntegrateDualRadial(lambda_block, eps, m, horizon,
                                   kCertificateTol);
  if (!block.ok()) return block.status();
  if (block->verdict != FeasibilityVerdict::kFeasible) {
    return absl::FailedPreconditionError(absl::StrCat(
        "block trajectory at lambda = ", lambda_block, " is ",
        std::string(FeasibilityVerdictName(block->verdict))));
  }
  // Per-axis term d eta + eps |eta| - x^2 of the summed constraint.
  std::vector<double> term(axis.size());
  for (size_t i = 0; i < axis.size(); ++i) {
    const double x = axis[i];
    if (std::abs(x) > horizon || (m > 1 && !(x > 0))) {
      return absl::InvalidArgumentError(absl::StrCat(
          "grid point ", x, " outside the block domain (0, ", horizon, "]"));
    }
    const double eta = block->EtaAt(x);
    double lhs = block->DerivativeAt(x) + eps * std::abs(eta);
    if (m > 1) lhs += (m - 1) * eta / x;
    term[i] = lhs - x * x;
  }
  // Odometer over the tensor grid.
  std::vector<size_t> index(n, 0);
  const double rhs_constant = -n * lambda_block;
  double worst = -std::numeric_limits<double>::infinity();
  while (true) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += term[index[i]];
    worst = std::max(worst, sum - rhs_constant);
    ++report.points;
    int k = 0;
    while (k < n && ++index[k] == axis.size()) index[k++] = 0;
    if (k == n) break;
  }
  report.max_violation = std::max(0.0, worst);
  report.objective = n * lambda_block;
  return report;
}

}  // namespace lipdp
