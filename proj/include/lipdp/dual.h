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

#ifndef LIPDP_DUAL_H_
#define LIPDP_DUAL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "lipdp/density.h"
#include "lipdp/ode.h"

namespace lipdp {

// Dual ODE of the MSE-optimal noise problem. For dimension n the radial form
//   eta'(r) + (n - 1) / r * eta(r) + eps |eta(r)| = r^2 - lambda,  eta(0) = 0
// is integrated on (0, r_max]; n = 1 is the one-dimensional problem on
// [0, v_max], extended to v < 0 by odd symmetry.

enum class FeasibilityVerdict { kFeasible, kInfeasible, kInconclusive };

std::string_view FeasibilityVerdictName(FeasibilityVerdict verdict);

// Inflection (eta'' = 0), stationary point (eta' = 0 after the inflection)
// and the last zero crossing of eta.
struct Breakpoints {
  std::optional<double> inflection;
  std::optional<double> stationary;
  std::optional<double> crossing;
};

// One integration segment with a fixed sign of eta.
struct DualSegment {
  DenseStep step;
  // The segment covers [step.t0, end]; end < step.t1() after a crossing.
  double end = 0.0;
  int branch_sign = 1;
};

struct DualTrajectory {
  double lambda = 0.0;
  double eps = 1.0;
  int dimension_n = 1;
  double truncation = 0.0;
  // Step endpoints, starting at 0 with eta = 0.
  std::vector<double> grid;
  std::vector<double> eta;
  std::vector<int> branch_sign;
  std::vector<DualSegment> segments;
  FeasibilityVerdict verdict = FeasibilityVerdict::kInconclusive;
  Breakpoints breakpoints;
  std::string diagnostics;
  // Set when integration stopped early on a numerical failure.
  bool aborted = false;
  // Series start used below `start` when n > 1.
  double start = 0.0;
  double series_a1 = 0.0;
  double series_a2 = 0.0;

  // Dense interpolant; for n = 1 negative arguments use odd symmetry.
  double EtaAt(double v) const;
  // Derivative of the dense interpolant (independent of the ODE right side).
  double DerivativeAt(double v) const;
};

struct DualOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  // Start radius for n > 1, in units of 1/eps.
  double start_radius = 1e-6;
  int max_steps = 200000;
};

// Right side of the ODE on the branch with sign(eta) = branch_sign.
double DualRhs(double r, double eta, double lambda, double eps, int n,
               int branch_sign);
// d/dr of the right side along the solution: eta''.
double DualSecondDerivative(double r, double eta, double lambda, double eps,
                            int n, int branch_sign);

// Default truncation max(20, 5 sqrt(n (n + 1))) / eps.
double DefaultHorizon(int n, double eps);

// Requires eps > 0 and v_max >= 20 / eps.
absl::StatusOr<DualTrajectory> IntegrateDual1D(double lambda, double eps,
                                               double v_max, double tol,
                                               const DualOptions& options = {});

// Requires n >= 1, eps > 0 and r_max >= 20 / eps. For n > 1 the solution is
// started at r0 = start_radius / eps from eta = a1 r0 + a2 r0^2 with
// a1 = -lambda / n and a2 = -sigma eps a1 / (n + 1).
absl::StatusOr<DualTrajectory> IntegrateDualRadial(
    double lambda, double eps, int n, double r_max, double tol,
    const DualOptions& options = {});

// Surrogate for the asymptotic condition lim eta >= 0 at finite horizon:
//   Feasible: eta has crossed zero (or never went negative), eta' >= 0 at
//     every step point after the last crossing, and eta > 0, eta' > 0 at
//     truncation.
//   Infeasible: at truncation eta < 0, eta' < 0 and eta'' < 0 (no inflection
//     left on the negative branch), or eta < -1e6 max(lambda, 1).
//   Inconclusive: anything else, e.g. negative but already convex.
FeasibilityVerdict ClassifyFeasibility(const DualTrajectory& trajectory);

// CSV with columns v_or_r, eta, branch_sign and, when requested, the closed
// form at lambda* as "closed_form".
std::string DualTrajectoryCsv(const DualTrajectory& trajectory,
                              bool closed_form_overlay);

// Closed forms at lambda*:
//   1D      eta(v) = -v (eps |v| + 2) / eps^2,       lambda* = 2 / eps^2
//   radial  eta(r) = -r (eps r + n + 1) / eps^2,     lambda* = n (n + 1) / eps^2
double ClosedFormEta(int n, double eps, double r);
double TheoreticalLambdaStar(int n, double eps);

// ---------------------------------------------------------------------------
// Certificates.

struct DualProblem {
  // 1 is the one-dimensional problem; n > 1 the radial one.
  int n = 1;
  bool radial = false;

  static DualProblem OneD() { return {1, false}; }
  static DualProblem Radial(int n) { return {n, true}; }
  std::string Name() const;
};

struct CertificateResult {
  double lambda_star_estimate = 0.0;
  double lambda_star_theory = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double horizon = 0.0;
};

// Bisection on [0, 4 lambda*_theory] over the Feasible/Infeasible boundary.
// An Inconclusive midpoint is retried with the horizon doubled, up to three
// times; FailedPrecondition if it stays Inconclusive.
absl::StatusOr<CertificateResult> BisectLambdaStar(
    const DualProblem& problem, double eps, double tol,
    std::optional<double> horizon = std::nullopt);

std::string CertificateJson(const DualProblem& problem, double eps, double tol,
                            const CertificateResult& result);

// Max over the grid of |LHS - RHS| of the ODE for the closed form, at
// lambda = lambda* or the given override.
absl::StatusOr<double> ClosedFormDualResidual(
    const DualProblem& problem, double eps, std::span<const double> grid,
    std::optional<double> lambda = std::nullopt);

enum class SeparableKind { kL1, kComposite };

struct SeparableDualReport {
  double max_violation = 0.0;
  double objective = 0.0;
  int points = 0;
  double block_lambda_star = 0.0;
};

// Sums per-block trajectories: L1(n) uses n copies of the 1D dual, one per
// coordinate; Composite(n, m) uses n copies of the radial dual of dimension
// m, one per block radius. Checks
//   sum_i (d_i eta_i + eps |eta_i|) <= sum_i x_i^2 - n lambda_block
// on the tensor grid of `axis` (coordinates for L1, radii for Composite),
// with derivatives from the dense interpolant. For Composite, d_i includes
// the (m - 1) / r_i eta_i divergence term.
absl::StatusOr<SeparableDualReport> VerifySeparableDual(
    SeparableKind kind, int n, int m, double eps, double lambda_block,
    std::span<const double> axis);

}  // namespace lipdp

#endif  // LIPDP_DUAL_H_
