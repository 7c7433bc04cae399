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

#ifndef LIPDP_QUADRATURE_H_
#define LIPDP_QUADRATURE_H_

#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "lipdp/density.h"

namespace lipdp {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule GaussLegendre(int n);

// Composite rule: n-point Gauss-Legendre on every panel between consecutive
// breakpoints (which must be increasing).
QuadratureRule CompositeRule(std::span<const double> breakpoints, int n);

// Tensor product of the same 1D rule along every axis.
double IntegrateTensor(
    const std::function<double(std::span<const double>)>& f, int dimension,
    const QuadratureRule& rule);

// Breakpoints 0, +-scale/8, +-scale/4, ... doubling up to +-radius.
std::vector<double> GradedBreakpoints(double radius, double scale);

// Numerical mass of a density over the box [-radius, radius]^d with graded
// panels. Dimensions above 4 are rejected (the tensor rule is exponential
// in d).
absl::StatusOr<double> DensityMass(const DensityModel& model, double radius,
                                   double scale, int nodes_per_panel = 6);

}  // namespace lipdp

#endif  // LIPDP_QUADRATURE_H_
