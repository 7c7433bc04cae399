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

#include "lipdp/quadrature.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace lipdp {

QuadratureRule GaussLegendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pn1 = n == 0 ? 0.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule CompositeRule(std::span<const double> breakpoints, int n) {
  const QuadratureRule base = GaussLegendre(n);
  QuadratureRule rule;
  for (size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double half = 0.5 * (breakpoints[p + 1] - breakpoints[p]);
    const double mid = 0.5 * (breakpoints[p + 1] + breakpoints[p]);
    for (int i = 0; i < n; ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

double IntegrateTensor(
    const std::function<double(std::span<const double>)>& f, int dimension,
    const QuadratureRule& rule) {
  const int k = static_cast<int>(rule.nodes.size());
  std::vector<int> index(dimension, 0);
  std::vector<double> point(dimension, rule.nodes[0]);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int d = 0; d < dimension; ++d) w *= rule.weights[index[d]];
    total += w * f(point);
    int d = 0;
    while (d < dimension) {
      if (++index[d] < k) {
        point[d] = rule.nodes[index[d]];
        break;
      }
      index[d] = 0;
      point[d] = rule.nodes[0];
      ++d;
    }
    if (d == dimension) break;
  }
  return total;
}

std::vector<double> GradedBreakpoints(double radius, double scale) {
  std::vector<double> positive;
  for (double x = scale / 8.0; x < radius; x *= 2.0) positive.push_back(x);
  positive.push_back(radius);
  std::vector<double> points;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    points.push_back(-*it);
  }
  points.push_back(0.0);
  points.insert(points.end(), positive.begin(), positive.end());
  return points;
}

absl::StatusOr<double> DensityMass(const DensityModel& model, double radius,
                                   double scale, int nodes_per_panel) {
  if (model.dimension < 1 || model.dimension > 4) {
    return absl::InvalidArgumentError(absl::StrCat(
        "numerical mass supported for dimension 1..4, got ", model.dimension));
  }
  if (!(radius > 0) || !(scale > 0)) {
    return absl::InvalidArgumentError("radius and scale must be positive");
  }
  const std::vector<double> breaks = GradedBreakpoints(radius, scale);
  const QuadratureRule rule = CompositeRule(breaks, nodes_per_panel);
  return IntegrateTensor(
      [&model](std::span<const double> v) { return model.Density(v); },
      model.dimension, rule);
}

}  // namespace lipdp
