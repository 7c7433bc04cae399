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

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "lipdp/mechanisms.h"

namespace lipdp {

StaircaseControl::StaircaseControl(double eps, double q)
    : eps_(eps), q_(q), ratio_(std::exp(-eps * q)) {
  // Unnormalized mass: q (eps/2) (1 + r) / (1 - r).
  log_mass_ = std::log(q * eps / 2.0) + std::log1p(ratio_) -
              std::log(-std::expm1(-eps * q));
}

absl::StatusOr<StaircaseControl> StaircaseControl::Create(double eps,
                                                          double quantization) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", eps));
  }
  if (!(quantization > 0) || !std::isfinite(quantization)) {
    return absl::InvalidArgumentError(
        absl::StrCat("quantization must be positive, got ", quantization));
  }
  return StaircaseControl(eps, quantization);
}

double StaircaseControl::LogDensity(double v) const {
  const double left_edge = std::floor(v / q_) * q_;
  return std::log(eps_ / 2.0) - eps_ * std::abs(left_edge) - log_mass_;
}

double StaircaseControl::Cdf(double v) const {
  const double j = std::floor(v / q_);
  const double in_cell = (v - j * q_) * std::exp(LogDensity(v));
  // Mass of cell k is (1 - r) r^|k| / (1 + r).
  if (j <= 0) {
    return std::pow(ratio_, 1.0 - j) / (1.0 + ratio_) + in_cell;
  }
  return 1.0 - std::pow(ratio_, j) / (1.0 + ratio_) + in_cell;
}

double StaircaseControl::Sample(Rng& rng) const {
  const double u_zero = rng.Uniform();
  const uint64_t word = rng.NextU64();
  const double u_offset = rng.Uniform();
  const bool negative = (word >> 63) != 0;
  const double u_geom =
      (static_cast<double>((word << 1) >> 11) + 0.5) * 0x1.0p-53;

  double cell = 0.0;
  if (u_zero >= (1.0 - ratio_) / (1.0 + ratio_)) {
    // |j| - 1 is geometric with success probability 1 - r.
    const double k = 1.0 + std::floor(std::log(u_geom) / std::log(ratio_));
    cell = negative ? -k : k;
  }
  return (cell + u_offset) * q_;
}

DensityModel StaircaseControl::Model() const {
  DensityModel model;
  model.name = "staircase";
  model.dimension = 1;
  model.log_normalization = std::log(eps_ / 2.0) - log_mass_;
  model.normalization_constant = std::exp(model.log_normalization);
  model.log_density = [self = *this](std::span<const double> v) {
    return self.LogDensity(v[0]);
  };
  return model;
}

absl::StatusOr<double> StaircaseLogDensity1D(double v, double eps,
                                             double quantization) {
  absl::StatusOr<StaircaseControl> control =
      StaircaseControl::Create(eps, quantization);
  if (!control.ok()) return control.status();
  return control->LogDensity(v);
}

}  // namespace lipdp
