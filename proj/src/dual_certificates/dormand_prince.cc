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

#include "absl/strings/str_cat.h"
#include "lipdp/ode.h"

namespace lipdp {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth minus fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Hairer's dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

}  // namespace

double DenseStep::Eval(double t) const {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  return coeff[0] +
         s * (coeff[1] + s1 * (coeff[2] + s * (coeff[3] + s1 * coeff[4])));
}

double DenseStep::Derivative(double t) const {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  const double a = coeff[3] + s1 * coeff[4];
  const double da = -coeff[4];
  const double b = coeff[2] + s * a;
  const double db = a + s * da;
  const double c = s1 * b;
  const double dc = -b + s1 * db;
  const double d = coeff[1] + c;
  return (d + s * dc) / h;
}

DormandPrinceResult DormandPrinceStep(const ScalarRhs& f, double t, double y,
                                      double h, double k1) {
  const double k2 = f(t + c2 * h, y + h * a21 * k1);
  const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const double k5 =
      f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                      a64 * k4 + a65 * k5));
  DormandPrinceResult r;
  r.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const double k7 = f(t + h, r.y);
  r.k_last = k7;
  r.error =
      h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  DenseStep& dense = r.dense;
  dense.t0 = t;
  dense.h = h;
  dense.coeff[0] = y;
  dense.coeff[1] = r.y - y;
  dense.coeff[2] = h * k1 - dense.coeff[1];
  dense.coeff[3] = dense.coeff[1] - h * k7 - dense.coeff[2];
  dense.coeff[4] =
      h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
  return r;
}

double NextStepSize(double h, double scaled_error) {
  if (scaled_error == 0.0) return 5.0 * h;
  const double factor = 0.9 * std::pow(scaled_error, -0.2);
  return h * std::clamp(factor, 0.2, 5.0);
}

double OdeSolution::Eval(double at) const {
  if (steps.empty()) return y.front();
  auto it = std::lower_bound(
      steps.begin(), steps.end(), at,
      [](const DenseStep& s, double v) { return s.t1() < v; });
  if (it == steps.end()) it = steps.end() - 1;
  return it->Eval(at);
}

absl::StatusOr<OdeSolution> IntegrateScalar(const ScalarRhs& f, double t0,
                                            double y0, double t1,
                                            const OdeOptions& options) {
  if (!(t1 > t0)) {
    return absl::InvalidArgumentError("integration interval must be nonempty");
  }
  OdeSolution sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  double t = t0, y = y0, k1 = f(t0, y0);
  double h = options.initial_step > 0 ? options.initial_step : (t1 - t0) * 1e-3;
  for (int n = 0; t < t1; ++n) {
    if (n >= options.max_steps) {
      return absl::ResourceExhaustedError(
          absl::StrCat("step limit ", options.max_steps, " reached at t = ", t));
    }
    if (h < options.min_step * std::max(1.0, std::abs(t))) {
      return absl::FailedPreconditionError(
          absl::StrCat("step size underflow at t = ", t));
    }
    const bool last = t + h >= t1;
    const double step = last ? t1 - t : h;
    const DormandPrinceResult r = DormandPrinceStep(f, t, y, step, k1);
    const double scale =
        options.atol + options.rtol * std::max(std::abs(y), std::abs(r.y));
    const double err = std::abs(r.error) / scale;
    if (!(err <= 1.0)) {
      ++sol.rejected;
      h = std::isfinite(err) ? NextStepSize(step, err) : 0.2 * step;
      continue;
    }
    t = last ? t1 : t + step;
    y = r.y;
    k1 = r.k_last;
    sol.t.push_back(t);
    sol.y.push_back(y);
    sol.steps.push_back(r.dense);
    h = NextStepSize(step, err);
  }
  return sol;
}

}  // namespace lipdp
