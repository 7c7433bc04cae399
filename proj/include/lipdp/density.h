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

#ifndef LIPDP_DENSITY_H_
#define LIPDP_DENSITY_H_

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace lipdp {

// A noise density given by its logarithm. log_density may return -infinity
// outside the support.
struct DensityModel {
  std::string name;
  std::function<double(std::span<const double>)> log_density;
  int dimension = 1;
  // Constant c in density = c * exp(-shape(v)); for grid-discretized models
  // this is 1 / (numerical mass of the unnormalized density).
  double normalization_constant = 1.0;
  // ln(normalization_constant); the primary value for large dimensions.
  double log_normalization = 0.0;

  double Density(std::span<const double> v) const {
    return std::exp(log_density(v));
  }
};

// Uniform grid lo, lo + step, ..., hi.
class Grid1D {
 public:
  // Requires lo < hi, step > 0 and (hi - lo) / step an integer >= 2 (to a
  // relative tolerance of 1e-9).
  static absl::StatusOr<Grid1D> Create(double lo, double hi, double step);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return step_; }
  int size() const { return intervals_ + 1; }
  double Point(int i) const { return i == intervals_ ? hi_ : lo_ + i * step_; }
  std::vector<double> Points() const;

 private:
  Grid1D(double lo, double hi, double step, int intervals)
      : lo_(lo), hi_(hi), step_(step), intervals_(intervals) {}

  double lo_;
  double hi_;
  double step_;
  int intervals_;
};

}  // namespace lipdp

#endif  // LIPDP_DENSITY_H_
