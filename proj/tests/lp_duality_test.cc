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

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gtest/gtest.h"
#include "json.hpp"
#include "lipdp/lp.h"

namespace lipdp {
namespace {

// Optimum of min c'x, Ax = b, x >= 0 by enumerating every basis. Only for
// a handful of columns.
double BruteForceOptimum(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c) {
  const int rows = a.rows(), cols = a.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(rows);
  for (int i = 0; i < rows; ++i) pick[i] = i;
  while (true) {
    Eigen::MatrixXd basis(rows, rows);
    for (int i = 0; i < rows; ++i) basis.col(i) = a.col(pick[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.isInvertible()) {
      const Eigen::VectorXd xb = lu.solve(b);
      if (xb.minCoeff() >= -1e-12) {
        double cost = 0.0;
        for (int i = 0; i < rows; ++i) cost += c[pick[i]] * xb[i];
        best = std::min(best, cost);
      }
    }
    int k = rows - 1;
    while (k >= 0 && pick[k] == cols - rows + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < rows; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Dense standard form of a discretized instance: [nu 1' 0; A_in I] [g; s].
void DenseStandardForm(const LpInstance& inst, Eigen::MatrixXd& a,
                       Eigen::VectorXd& b, Eigen::VectorXd& c) {
  const int n = inst.n, k = inst.InequalityCount();
  a = Eigen::MatrixXd::Zero(1 + k, n + k);
  b = Eigen::VectorXd::Zero(1 + k);
  c = Eigen::VectorXd::Zero(n + k);
  for (int i = 0; i < n; ++i) {
    a(0, i) = inst.nu;
    c[i] = inst.objective[i];
  }
  b[0] = 1.0;
  for (int r = 0; r < k; ++r) {
    for (const auto& [col, coef] : inst.inequality_rows[r]) a(1 + r, col) = coef;
    a(1 + r, n + r) = 1.0;
  }
}

StandardFormLp Sparse(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& c) {
  StandardFormLp lp;
  lp.a = a.sparseView();
  lp.b = b;
  lp.c = c;
  return lp;
}

LpSolution SolveOrDie(double eps, double m, double nu) {
  absl::StatusOr<LpInstance> inst = BuildPrimal(eps, m, nu);
  EXPECT_TRUE(inst.ok()) << inst.status();
  absl::StatusOr<LpSolution> sol = Solve(*inst);
  EXPECT_TRUE(sol.ok()) << sol.status();
  return *sol;
}

TEST(BuildPrimal, SizesAndRows) {
  const LpInstance inst = *BuildPrimal(1.0, 5.0, 0.1);
  EXPECT_EQ(inst.n, 101);
  EXPECT_EQ(inst.InequalityCount(), 200);  // 100 two-sided constraints
  EXPECT_DOUBLE_EQ(inst.grid.front(), -5.0);
  EXPECT_DOUBLE_EQ(inst.grid.back(), 5.0);
  EXPECT_EQ(inst.grid[50], 0.0);
  for (int i = 0; i < inst.n; ++i) {
    EXPECT_EQ(inst.grid[i], -inst.grid[inst.n - 1 - i]);
    EXPECT_NEAR(inst.objective[i], inst.grid[i] * inst.grid[i] * 0.1, 1e-15);
  }
  // kappa row: (g1 - g0)/nu - eps (g0 + g1)/2 <= 0.
  const auto& row = inst.inequality_rows[0];
  ASSERT_EQ(row.size(), 2u);
  EXPECT_EQ(row[0].first, 0);
  EXPECT_NEAR(row[0].second, -10.0 - 0.5, 1e-12);
  EXPECT_NEAR(row[1].second, 10.0 - 0.5, 1e-12);
}

TEST(BuildPrimal, Validation) {
  EXPECT_FALSE(BuildPrimal(1.0, 5.0, 0.3).ok());
  EXPECT_FALSE(BuildPrimal(0.0, 5.0, 0.1).ok());
  EXPECT_FALSE(BuildPrimal(1.0, -5.0, 0.1).ok());
  EXPECT_FALSE(BuildPrimal(1.0, 5.0, 0.0).ok());
  // Coarse grid, nu > 2 / eps, is still a valid instance.
  const LpInstance coarse = *BuildPrimal(1.0, 6.0, 3.0);
  EXPECT_EQ(coarse.n, 5);
  EXPECT_EQ(SolveOrDie(1.0, 6.0, 3.0).status, LpStatus::kOptimal);
}

TEST(InteriorPoint, MatchesBruteForceOnTinyInstances) {
  for (auto [m, nu] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.0, 0.5}, {3.0, 3.0}}) {
    const LpInstance inst = *BuildPrimal(1.0, m, nu);
    Eigen::MatrixXd a;
    Eigen::VectorXd b, c;
    DenseStandardForm(inst, a, b, c);
    const double want = BruteForceOptimum(a, b, c);
    const LpSolution sol = *Solve(inst);
    EXPECT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_NEAR(sol.primal_objective, want, 1e-8 * (1 + want)) << m << " " << nu;
  }
  EXPECT_NEAR(SolveOrDie(1.0, 0.5, 0.5).primal_objective, 0.13636, 1e-5);
}

TEST(InteriorPoint, GenericLpAgainstBruteForce) {
  Eigen::MatrixXd a(2, 5);
  a << 1, 1, 1, 0, 0,
       1, -1, 0, 1, 2;
  Eigen::VectorXd b(2), c(5);
  b << 4, 1;
  c << -1, -2, 0.5, 0.25, 1;
  const IpmResult r = *SolveInteriorPoint(Sparse(a, b, c));
  EXPECT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.primal_objective, BruteForceOptimum(a, b, c), 1e-8);
  EXPECT_NEAR(r.primal_objective, r.dual_objective, 1e-7);
}

TEST(InteriorPoint, DetectsInfeasibleAndUnbounded) {
  // x1 + x2 = -1 with x >= 0.
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::VectorXd b(1), c(2);
  b << -1;
  c << 1, 1;
  EXPECT_EQ(SolveInteriorPoint(Sparse(a, b, c))->status, LpStatus::kInfeasible);
  // min -x1 with x1 - x2 = 0.
  Eigen::MatrixXd a2(1, 2);
  a2 << 1, -1;
  Eigen::VectorXd b2(1), c2(2);
  b2 << 0;
  c2 << -1, 0;
  EXPECT_EQ(SolveInteriorPoint(Sparse(a2, b2, c2))->status, LpStatus::kUnbounded);
  EXPECT_EQ(std::string(LpStatusName(LpStatus::kIterLimit)), "IterLimit");
}

TEST(InteriorPoint, IterationLimitIsReported) {
  const LpInstance inst = *BuildPrimal(1.0, 8.0, 0.05);
  IpmOptions opts;
  opts.max_iterations = 2;
  EXPECT_EQ(Solve(inst, opts)->status, LpStatus::kIterLimit);
}

TEST(Solve, OptimumNearTwoOverEpsSquared) {
  const auto start = std::chrono::steady_clock::now();
  const LpSolution a = SolveOrDie(1.0, 8.0, 0.05);
  EXPECT_EQ(a.status, LpStatus::kOptimal);
  EXPECT_GE(a.primal_objective, 1.96);
  EXPECT_LE(a.primal_objective, 2.04);
  EXPECT_LE(std::fabs(a.gap), 1e-7);
  const LpSolution b = SolveOrDie(2.0, 4.0, 0.025);
  EXPECT_NEAR(b.primal_objective, 0.5, 0.01);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
            60.0);
}

TEST(Solve, SelfConsistency) {
  for (auto [eps, m, nu] : std::vector<std::tuple<double, double, double>>{
           {1.0, 5.0, 0.1}, {1.0, 8.0, 0.05}, {2.0, 4.0, 0.025}, {0.5, 10.0, 0.2}}) {
    const LpInstance inst = *BuildPrimal(eps, m, nu);
    const LpSolution sol = *Solve(inst);
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    const double scale = 1e-7 * (1 + std::fabs(sol.primal_objective));
    const PrimalResiduals p = CheckPrimal(inst, sol.g);
    EXPECT_LE(p.max_inequality, scale);
    EXPECT_LE(std::fabs(p.normalization), scale);
    EXPECT_GE(p.min_value, -scale);
    EXPECT_LE(DualViolation(inst, sol.lambda, sol.kappa, sol.mu), scale);
    EXPECT_LE(std::fabs(sol.gap), scale);
    EXPECT_LE(sol.primal_residual, scale);
    EXPECT_LE(sol.dual_residual, scale);
  }
}

TEST(Solve, NotAboveGridLaplaceCost) {
  for (auto [eps, m, nu] : std::vector<std::tuple<double, double, double>>{
           {1.0, 5.0, 0.1}, {1.0, 8.0, 0.05}, {2.0, 4.0, 0.025}}) {
    const LpInstance inst = *BuildPrimal(eps, m, nu);
    const std::vector<double> laplace = GridLaplaceVector(inst);
    const PrimalResiduals p = CheckPrimal(inst, laplace);
    EXPECT_LE(p.max_inequality, 1e-6);
    EXPECT_NEAR(p.normalization, 0.0, 1e-12);
    double cost = 0.0;
    for (int i = 0; i < inst.n; ++i) cost += inst.objective[i] * laplace[i];
    EXPECT_LE(Solve(inst)->primal_objective, cost + 1e-9);
  }
}

TEST(Solve, SymmetricSolution) {
  const LpSolution sol = SolveOrDie(1.0, 8.0, 0.05);
  const int n = static_cast<int>(sol.g.size());
  double peak = 0.0;
  for (double g : sol.g) peak = std::max(peak, g);
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(sol.g[i], sol.g[n - 1 - i], 1e-6 * peak) << i;
  }
}

TEST(Solve, LogLinearInterior) {
  const LpInstance inst = *BuildPrimal(1.0, 8.0, 0.05);
  const LpSolution sol = *Solve(inst);
  // Fit ln g = a - b |v| on the interior (|v| in [1, M/2]) by least squares.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int i = 0; i < inst.n; ++i) {
    const double x = std::fabs(inst.grid[i]);
    if (x < 1.0 || x > 4.0) continue;
    const double y = std::log(sol.g[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++count;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  for (int i = 0; i < inst.n; ++i) {
    const double x = std::fabs(inst.grid[i]);
    if (x < 1.0 || x > 4.0) continue;
    EXPECT_NEAR(sol.g[i] / std::exp(intercept + slope * x), 1.0, 0.01) << inst.grid[i];
  }
  EXPECT_NEAR(slope, -1.0, 0.05);
}

TEST(Solve, ComplementarySlackness) {
  const LpInstance inst = *BuildPrimal(1.0, 8.0, 0.05);
  const LpSolution sol = *Solve(inst);
  const DualityGapReport r = *MakeDualityGapReport(inst, sol);
  EXPECT_LE(r.pair_slackness, 1e-7);
  for (size_t i = 0; i < sol.kappa.size(); ++i) {
    EXPECT_LE(std::min(sol.kappa[i], sol.mu[i]), 1e-7) << i;
  }
  EXPECT_LE(r.gap, 1e-7);
  EXPECT_TRUE(r.certificate_feasible);
  EXPECT_LE(r.certified_lower_bound, sol.primal_objective + 1e-9);
}

TEST(Solve, PerturbedDualIsFlagged) {
  const LpInstance inst = *BuildPrimal(1.0, 8.0, 0.05);
  const LpSolution sol = *Solve(inst);
  const DualityGapReport r = *MakeDualityGapReport(inst, sol, sol.lambda + 0.1);
  EXPECT_FALSE(r.certificate_feasible);
  EXPECT_GT(r.dual_violation, 0.1 * inst.nu * 0.99);
}

TEST(Solve, WeakDuality) {
  const LpInstance inst = *BuildPrimal(1.0, 6.0, 0.1);
  const LpSolution sol = *Solve(inst);
  // Any nonnegative multipliers certify a lower bound on every feasible cost.
  std::vector<double> kappa(sol.kappa.size()), mu(sol.mu.size());
  for (size_t i = 0; i < kappa.size(); ++i) {
    kappa[i] = 0.5 * sol.kappa[i] + 0.01 * (i % 3);
    mu[i] = 0.8 * sol.mu[i];
  }
  const double bound = CertifiedLowerBound(inst, kappa, mu);
  EXPECT_LE(bound, sol.primal_objective + 1e-9);
  const std::vector<double> laplace = GridLaplaceVector(inst);
  double cost = 0.0;
  for (int i = 0; i < inst.n; ++i) cost += inst.objective[i] * laplace[i];
  EXPECT_LE(bound, cost);
  EXPECT_NEAR(CertifiedLowerBound(inst, sol.kappa, sol.mu), sol.lambda, 1e-6);
}

TEST(Convergence, DefaultScheduleIsMonotone) {
  const std::vector<ConvergenceRow> rows = *ConvergenceStudy(1.0, DefaultSchedule());
  ASSERT_EQ(rows.size(), 4u);
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_FALSE(rows[i].flagged);
    EXPECT_EQ(rows[i].status, LpStatus::kOptimal);
    if (i > 0) {
      EXPECT_LT(rows[i].abs_error, rows[i - 1].abs_error);
    }
  }
  EXPECT_EQ(DefaultSchedule(),
            (std::vector<std::pair<double, double>>{{4, 0.2}, {6, 0.1}, {8, 0.05}, {10, 0.025}}));
}

TEST(Convergence, SingleRow) {
  const std::vector<ConvergenceRow> rows = *ConvergenceStudy(1.0, {{4.0, 0.2}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].n, 41);
}

TEST(Convergence, ScalingInvariance) {
  std::vector<std::pair<double, double>> scaled;
  for (auto [m, nu] : DefaultSchedule()) scaled.emplace_back(2 * m, 2 * nu);
  const std::vector<ConvergenceRow> a = *ConvergenceStudy(1.0, DefaultSchedule());
  const std::vector<ConvergenceRow> b = *ConvergenceStudy(0.5, scaled);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].rel_error, b[i].rel_error, 1e-6) << i;
    EXPECT_NEAR(b[i].optimum, 4.0 * a[i].optimum, 1e-6 * b[i].optimum) << i;
  }
}

TEST(Export, CsvAndJson) {
  const LpInstance inst = *BuildPrimal(1.0, 2.0, 0.5);
  const LpSolution sol = *Solve(inst);
  const std::string csv = LpSolutionCsv(inst, sol);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,v,g,laplace_grid");
  size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, static_cast<size_t>(inst.n) + 1);
  const nlohmann::json j =
      nlohmann::json::parse(LpSolutionJson(inst, sol, *MakeDualityGapReport(inst, sol)));
  EXPECT_EQ(j["status"], "Optimal");
  EXPECT_EQ(j["N"], inst.n);
  const std::string conv = ConvergenceCsv(*ConvergenceStudy(1.0, {{2.0, 0.5}}));
  EXPECT_EQ(conv.substr(0, conv.find('\n')), "M,nu,N,status,optimum,gap,abs_error,rel_error,flagged");
}

}  // namespace
}  // namespace lipdp
