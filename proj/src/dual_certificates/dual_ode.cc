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
#include <string>

#include "absl/strings/str_cat.h"
#include "lipdp/dual.h"
#include "lipdp/format.h"

namespace lipdp {
namespace {

int BranchForSource(double r, double lambda) {
  return r * r - lambda >= 0.0 ? 1 : -1;
}

// Root of dense-output function g on [a, b], given g(a) and g(b) of opposite
// signs.
template <typename G>
double Bisect(const G& g, double a, double b, double ga) {
  for (int i = 0; i < 200 && b - a > 4e-16 * std::max(1.0, std::abs(b)); ++i) {
    const double mid = 0.5 * (a + b);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0) == (ga < 0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

struct EventState {
  double r = 0.0;
  double first = 0.0;   // eta'
  double second = 0.0;  // eta''
};

class Integrator {
 public:
  Integrator(DualTrajectory& traj, double rtol, double atol, int max_steps)
      : traj_(traj), rtol_(rtol), atol_(atol), max_steps_(max_steps) {}

  void Run(double r, double eta, int sigma) {
    const double lambda = traj_.lambda, eps = traj_.eps;
    const int n = traj_.dimension_n;
    const double horizon = traj_.truncation;
    const double blowup = 1e6 * std::max(lambda, 1.0);
    Push(r, eta, sigma);
    EventState prev = Events(r, eta, sigma);
    double h = std::min(0.01 / eps, std::max(r, 1e-3 / eps));
    if (n > 1) h = std::min(h, 0.5 * r);
    int steps = 0;
    while (r < horizon) {
      if (++steps > max_steps_) {
        Abort(absl::StrCat("step limit ", max_steps_, " reached at r = ", r));
        return;
      }
      if (h < 1e-14 * std::max(1.0, r)) {
        Abort(absl::StrCat("step size underflow at r = ", r));
        return;
      }
      const auto f = [&](double t, double y) {
        return DualRhs(t, y, lambda, eps, n, sigma);
      };
      const bool last = r + h >= horizon;
      const double step = last ? horizon - r : h;
      const DormandPrinceResult res =
          DormandPrinceStep(f, r, eta, step, f(r, eta));
      const double scale =
          atol_ + rtol_ * std::max(std::abs(eta), std::abs(res.y));
      const double err = std::abs(res.error) / scale;
      if (!(err <= 1.0)) {
        h = std::isfinite(err) ? NextStepSize(step, err) : 0.2 * step;
        continue;
      }
      double r_next = last ? horizon : r + step;
      double eta_next = res.y;
      int next_sigma = sigma;
      // Leaving the branch: stop at the crossing and restart from eta = 0.
      if (sigma * eta_next < 0.0) {
        const DenseStep& d = res.dense;
        r_next = Bisect([&](double t) { return d.Eval(t); }, r, r_next, eta);
        eta_next = 0.0;
        next_sigma = BranchForSource(r_next, lambda);
        traj_.breakpoints.crossing = r_next;
      }
      traj_.segments.push_back({res.dense, r_next, sigma});
      const EventState cur = Events(r_next, eta_next, sigma);
      FindBreakpoints(prev, cur, res.dense, sigma);
      r = r_next;
      eta = eta_next;
      sigma = next_sigma;
      Push(r, eta, sigma);
      prev = Events(r, eta, sigma);
      h = NextStepSize(step, err);
      if (eta < -blowup) break;
    }
  }

 private:
  void Push(double r, double eta, int sigma) {
    traj_.grid.push_back(r);
    traj_.eta.push_back(eta);
    traj_.branch_sign.push_back(sigma);
  }

  void Abort(std::string message) {
    traj_.aborted = true;
    traj_.diagnostics = std::move(message);
  }

  EventState Events(double r, double eta, int sigma) const {
    return {r,
            DualRhs(r, eta, traj_.lambda, traj_.eps, traj_.dimension_n, sigma),
            DualSecondDerivative(r, eta, traj_.lambda, traj_.eps,
                                 traj_.dimension_n, sigma)};
  }

  void FindBreakpoints(const EventState& a, const EventState& b,
                       const DenseStep& d, int sigma) {
    Breakpoints& bp = traj_.breakpoints;
    if (!bp.inflection && a.second < 0.0 && b.second >= 0.0) {
      bp.inflection = Bisect(
          [&](double t) { return Events(t, d.Eval(t), sigma).second; }, a.r,
          b.r, a.second);
    }
    if (bp.inflection && !bp.stationary && a.first < 0.0 && b.first >= 0.0) {
      const double lo = std::max(a.r, *bp.inflection);
      const double g_lo = Events(lo, d.Eval(lo), sigma).first;
      bp.stationary =
          g_lo >= 0.0
              ? lo
              : Bisect([&](double t) { return Events(t, d.Eval(t), sigma).first; },
                       lo, b.r, g_lo);
    }
  }

  DualTrajectory& traj_;
  double rtol_;
  double atol_;
  int max_steps_;
};

absl::StatusOr<DualTrajectory> Integrate(double lambda, double eps, int n,
                                         double horizon, double tol,
                                         const DualOptions& options) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eps must be positive and finite, got ", eps));
  }
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (!std::isfinite(lambda)) {
    return absl::InvalidArgumentError("lambda must be finite");
  }
  if (!(tol > 0)) return absl::InvalidArgumentError("tol must be positive");
  if (!(horizon >= 20.0 / eps * (1.0 - 1e-12)) || !std::isfinite(horizon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "truncation point must be at least 20/eps = ", 20.0 / eps, ", got ",
        horizon));
  }
  DualTrajectory traj;
  traj.lambda = lambda;
  traj.eps = eps;
  traj.dimension_n = n;
  traj.truncation = horizon;
  const int sigma = lambda > 0 ? -1 : 1;
  Integrator integrator(traj, std::min(options.rtol, tol),
                        std::min(options.atol, 1e-2 * tol), options.max_steps);
  if (n == 1) {
    integrator.Run(0.0, 0.0, sigma);
  } else {
    const double r0 = options.start_radius / eps;
    traj.start = r0;
    traj.series_a1 = -lambda / n;
    traj.series_a2 = -sigma * eps * traj.series_a1 / (n + 1);
    traj.grid.push_back(0.0);
    traj.eta.push_back(0.0);
    traj.branch_sign.push_back(sigma);
    integrator.Run(r0, traj.series_a1 * r0 + traj.series_a2 * r0 * r0, sigma);
  }
  traj.verdict = ClassifyFeasibility(traj);
  if (traj.verdict == FeasibilityVerdict::kInconclusive &&
      traj.diagnostics.empty()) {
    traj.diagnostics = absl::StrCat(
        "no decision at truncation r = ", traj.grid.back(),
        "; raise the horizon (v_max)");
  }
  return traj;
}

}  // namespace

std::string_view FeasibilityVerdictName(FeasibilityVerdict verdict) {
  switch (verdict) {
    case FeasibilityVerdict::kFeasible:
      return "Feasible";
    case FeasibilityVerdict::kInfeasible:
      return "Infeasible";
    case FeasibilityVerdict::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

double DualRhs(double r, double eta, double lambda, double eps, int n,
               int branch_sign) {
  double f = r * r - lambda - branch_sign * eps * eta;
  if (n > 1) f -= (n - 1) * eta / r;
  return f;
}

double DualSecondDerivative(double r, double eta, double lambda, double eps,
                            int n, int branch_sign) {
  const double f = DualRhs(r, eta, lambda, eps, n, branch_sign);
  double df_dr = 2.0 * r;
  double df_deta = -branch_sign * eps;
  if (n > 1) {
    df_dr += (n - 1) * eta / (r * r);
    df_deta -= (n - 1) / r;
  }
  return df_dr + df_deta * f;
}

double DefaultHorizon(int n, double eps) {
  return std::max(20.0, 5.0 * std::sqrt(n * (n + 1.0))) / eps;
}

double DualTrajectory::EtaAt(double v) const {
  if (v < 0) return dimension_n == 1 ? -EtaAt(-v) : std::nan("");
  if (dimension_n > 1 && v < start) return v * (series_a1 + series_a2 * v);
  if (segments.empty() || v > segments.back().end) return std::nan("");
  auto it = std::lower_bound(
      segments.begin(), segments.end(), v,
      [](const DualSegment& s, double x) { return s.end < x; });
  return it->step.Eval(v);
}

double DualTrajectory::DerivativeAt(double v) const {
  if (v < 0) return dimension_n == 1 ? DerivativeAt(-v) : std::nan("");
  if (dimension_n > 1 && v < start) return series_a1 + 2.0 * series_a2 * v;
  if (segments.empty() || v > segments.back().end) return std::nan("");
  auto it = std::lower_bound(
      segments.begin(), segments.end(), v,
      [](const DualSegment& s, double x) { return s.end < x; });
  return it->step.Derivative(v);
}

FeasibilityVerdict ClassifyFeasibility(const DualTrajectory& t) {
  if (t.aborted || t.grid.size() < 2) return FeasibilityVerdict::kInconclusive;
  const size_t last = t.grid.size() - 1;
  const double r = t.grid[last];
  const double eta = t.eta[last];
  const int sigma = t.branch_sign[last];
  const double d1 = DualRhs(r, eta, t.lambda, t.eps, t.dimension_n, sigma);
  const double d2 =
      DualSecondDerivative(r, eta, t.lambda, t.eps, t.dimension_n, sigma);
  if (eta < -1e6 * std::max(t.lambda, 1.0)) {
    return FeasibilityVerdict::kInfeasible;
  }
  if (eta < 0 && d1 < 0 && d2 < 0) return FeasibilityVerdict::kInfeasible;
  if (eta > 0 && d1 > 0) {
    // Start of the final nonnegative stretch.
    size_t k = last;
    while (k > 0 && t.eta[k - 1] >= 0.0) --k;
    for (size_t i = std::max<size_t>(k, 1); i <= last; ++i) {
      const double di = DualRhs(t.grid[i], t.eta[i], t.lambda, t.eps,
                                t.dimension_n, t.branch_sign[i]);
      if (di < 0.0) return FeasibilityVerdict::kInconclusive;
    }
    return FeasibilityVerdict::kFeasible;
  }
  return FeasibilityVerdict::kInconclusive;
}

absl::StatusOr<DualTrajectory> IntegrateDual1D(double lambda, double eps,
                                               double v_max, double tol,
                                               const DualOptions& options) {
  return Integrate(lambda, eps, 1, v_max, tol, options);
}

absl::StatusOr<DualTrajectory> IntegrateDualRadial(double lambda, double eps,
                                                   int n, double r_max,
                                                   double tol,
                                                   const DualOptions& options) {
  return Integrate(lambda, eps, n, r_max, tol, options);
}

double ClosedFormEta(int n, double eps, double r) {
  return -r * (eps * std::abs(r) + n + 1) / (eps * eps);
}

double TheoreticalLambdaStar(int n, double eps) {
  return n * (n + 1.0) / (eps * eps);
}

std::string DualTrajectoryCsv(const DualTrajectory& t,
                              bool closed_form_overlay) {
  std::string out = "v_or_r,eta,branch_sign";
  if (closed_form_overlay) out += ",closed_form";
  out += "\n";
  for (size_t i = 0; i < t.grid.size(); ++i) {
    absl::StrAppend(&out, FormatDouble(t.grid[i]), ",",
                    FormatDouble(t.eta[i]), ",", t.branch_sign[i]);
    if (closed_form_overlay) {
      absl::StrAppend(&out, ",",
                      FormatDouble(ClosedFormEta(t.dimension_n, t.eps, t.grid[i])));
    }
    out += "\n";
  }
  return out;
}

}  // namespace lipdp
