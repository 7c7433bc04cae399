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

#include "lipdp/density.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace lipdp {

absl::StatusOr<Grid1D> Grid1D::Create(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid requires finite lo < hi, got [", lo, ", ", hi, "]"));
  }
  if (!(step > 0) || !std::isfinite(step)) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid step must be positive, got ", step));
  }
  const double ratio = (hi - lo) / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded) ||
      rounded < 2 || rounded > 1e8) {
    return absl::InvalidArgumentError(absl::StrCat(
        "(hi - lo) / step must be an integer >= 2, got ", ratio));
  }
  return Grid1D(lo, hi, step, static_cast<int>(rounded));
}

std::vector<double> Grid1D::Points() const {
  std::vector<double> points(size());
  for (int i = 0; i < size(); ++i) points[i] = Point(i);
  return points;
}

}  // namespace lipdp
