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

#ifndef LIPDP_ODE_H_
#define LIPDP_ODE_H_

#include <functional>
#include <vector>

#include "absl/status/statusor.h"

namespace lipdp {

// Right-hand side of a scalar ODE y' = f(t, y).
using ScalarRhs = std::function<double(double t, double y)>;

// Continuous extension of one Dormand-Prince step (fourth-order dense output).
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  double coeff[5] = {0.0, 0.0, 0.0, 0.0, 0.0};

  double t1() const { return t0 + h; }
  double Eval(double t) const;
  // Derivative of the interpolating polynomial, not a call to f.
  double Derivative(double t) const;
};

struct DormandPrinceResult {
  double y = 0.0;      // fifth-order solution at t + h
  double error = 0.0;  // fifth minus embedded fourth-order solution
  double k_last = 0.0; // f(t + h, y): the next step's first stage
  DenseStep dense;
};

// One step of the Dormand-Prince 5(4) pair. `k1` must equal f(t, y).
DormandPrinceResult DormandPrinceStep(const ScalarRhs& f, double t, double y,
                                      double h, double k1);

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: chosen from the interval length
  double min_step = 1e-14;    // relative to max(1, |t|)
  int max_steps = 1000000;
};

struct OdeSolution {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<DenseStep> steps;
  int rejected = 0;

  // Dense evaluation on [t.front(), t.back()].
  double Eval(double at) const;
};

// Adaptive integration of y' = f(t, y) from (t0, y0) to t1 > t0 with the
// standard mixed error norm atol + rtol * max(|y_n|, |y_{n+1}|).
// ResourceExhausted when the step limit is hit, FailedPrecondition on step
// size underflow.
absl::StatusOr<OdeSolution> IntegrateScalar(const ScalarRhs& f, double t0,
                                            double y0, double t1,
                                            const OdeOptions& options = {});

// Next step size from a scaled error norm (err <= 1 accepts the step).
double NextStepSize(double h, double scaled_error);

}  // namespace lipdp

#endif  // LIPDP_ODE_H_
