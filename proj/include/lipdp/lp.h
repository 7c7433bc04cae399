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

#ifndef LIPDP_LP_H_
#define LIPDP_LP_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "absl/status/statusor.h"

namespace lipdp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

std::string_view LpStatusName(LpStatus status);

// min c'x  s.t.  A x = b,  x >= 0.
struct StandardFormLp {
  Eigen::SparseMatrix<double> a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct IpmOptions {
  // Relative primal residual, dual residual and gap targets.
  double tolerance = 1e-9;
  int max_iterations = 200;
};

struct IpmResult {
  LpStatus status = LpStatus::kIterLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;  // reduced costs c - A'y
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  // ||b - Ax||_inf / (1 + ||b||_inf)
  double dual_residual = 0.0;    // ||c - A'y - z||_inf / (1 + ||c||_inf)
  double relative_gap = 0.0;     // |c'x - b'y| / (1 + |c'x|)
  int iterations = 0;
};

// Mehrotra predictor-corrector primal-dual interior point method. Newton
// steps solve the normal equations A D A' dy = r with a sparse LDL'
// factorization. Infeasible or unbounded problems are detected from
// diverging dual or primal iterates.
absl::StatusOr<IpmResult> SolveInteriorPoint(const StandardFormLp& lp,
                                             const IpmOptions& options = {});

// ---------------------------------------------------------------------------
// Truncated, discretized one-dimensional noise problem:
//   min  sum_i v_i^2 nu g_i
//   s.t. sum_i g_i nu = 1,  g >= 0,
//        (g_{i+1} - g_i) / nu <= eps (g_i + g_{i+1}) / 2   (multiplier kappa_i)
//        (g_i - g_{i+1}) / nu <= eps (g_i + g_{i+1}) / 2   (multiplier mu_i)
// on v_i = -M + i nu, i = 0..N-1, N = 2M/nu + 1.

struct LpInstance {
  double eps = 1.0;
  double m = 1.0;
  double nu = 1.0;
  int n = 0;  // grid points
  std::vector<double> grid;
  std::vector<double> objective;  // v_i^2 nu
  // Inequality rows as (column, coefficient) pairs; row 2i is the kappa_i
  // row, row 2i + 1 the mu_i row.
  std::vector<std::vector<std::pair<int, double>>> inequality_rows;

  int InequalityCount() const { return static_cast<int>(inequality_rows.size()); }
};

// InvalidArgument unless eps, M, nu > 0 and 2M/nu is an integer (relative
// tolerance 1e-9).
absl::StatusOr<LpInstance> BuildPrimal(double eps, double m, double nu);

struct LpSolution {
  LpStatus status = LpStatus::kIterLimit;
  std::vector<double> g;
  double primal_objective = 0.0;
  double lambda = 0.0;
  std::vector<double> kappa;
  std::vector<double> mu;
  double dual_objective = 0.0;
  double gap = 0.0;  // primal - dual objective
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

absl::StatusOr<LpSolution> Solve(const LpInstance& instance,
                                 const IpmOptions& options = {});

// Left-hand side minus right-hand side of every inequality row at g, and the
// normalization residual sum_i g_i nu - 1.
struct PrimalResiduals {
  double max_inequality = 0.0;  // positive means violated
  double normalization = 0.0;
  double min_value = 0.0;       // min_i g_i
};
PrimalResiduals CheckPrimal(const LpInstance& instance,
                            const std::vector<double>& g);

// Dual constraint per column: c_i - lambda nu + (A_in' w)_i >= 0 with
// w = (kappa, mu) >= 0. Returns the largest violation (0 if feasible).
double DualViolation(const LpInstance& instance, double lambda,
                     const std::vector<double>& kappa,
                     const std::vector<double>& mu);

// Largest lambda that (kappa, mu) certify: min_i (c_i + (A_in' w)_i) / nu.
// Weak duality makes it a lower bound on the discretized optimum.
double CertifiedLowerBound(const LpInstance& instance,
                           const std::vector<double>& kappa,
                           const std::vector<double>& mu);

struct DualityGapReport {
  double gap = 0.0;
  double relative_gap = 0.0;
  // max_i min(kappa_i, mu_i)
  double pair_slackness = 0.0;
  // max over rows and columns of |multiplier * slack|
  double complementarity = 0.0;
  double certified_lower_bound = 0.0;
  double dual_violation = 0.0;
  bool certificate_feasible = false;
};

// Reports the gap and slackness of an Optimal solution, with `lambda`
// (default: the solution's own) checked as a dual certificate alongside the
// solution's multipliers.
absl::StatusOr<DualityGapReport> MakeDualityGapReport(
    const LpInstance& instance, const LpSolution& solution,
    std::optional<double> lambda = std::nullopt);

// Grid-renormalized Laplace vector exp(-eps |v_i|) / sum_j exp(-eps |v_j|) nu.
std::vector<double> GridLaplaceVector(const LpInstance& instance);

struct ConvergenceRow {
  double m = 0.0;
  double nu = 0.0;
  int n = 0;
  LpStatus status = LpStatus::kIterLimit;
  double optimum = 0.0;
  double gap = 0.0;
  double abs_error = 0.0;  // |optimum - 2/eps^2|
  double rel_error = 0.0;  // abs_error * eps^2 / 2
  bool flagged = false;    // status is not Optimal
};

absl::StatusOr<std::vector<ConvergenceRow>> ConvergenceStudy(
    double eps, const std::vector<std::pair<double, double>>& schedule,
    const IpmOptions& options = {});

// The default four-row refinement schedule (M, nu) for eps = 1.
std::vector<std::pair<double, double>> DefaultSchedule();

// CSV columns i, v, g (plus laplace_grid, the grid-renormalized Laplace
// vector).
std::string LpSolutionCsv(const LpInstance& instance,
                          const LpSolution& solution);
std::string LpSolutionJson(const LpInstance& instance,
                           const LpSolution& solution,
                           const DualityGapReport& report);
std::string ConvergenceCsv(const std::vector<ConvergenceRow>& rows);

}  // namespace lipdp

#endif  // LIPDP_LP_H_
