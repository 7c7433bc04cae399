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

#include "lipdp/mechanisms.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"

namespace lipdp {
namespace {

constexpr uint64_t kSignBit = uint64_t{1} << 63;

// Sign from bit 63, Exponential(1) magnitude from the remaining bits.
double SignedExponential(Rng& rng) {
  const uint64_t word = rng.NextU64();
  const double u =
      (static_cast<double>((word & ~kSignBit) >> 10) + 0.5) * 0x1.0p-53;
  const double magnitude = -std::log(u);
  return (word & kSignBit) ? -magnitude : magnitude;
}

void SampleRadialBlock(int k, double eps, Rng& rng, double* out) {
  double radius = 0.0;
  for (int i = 0; i < k; ++i) radius += rng.StandardExponential();
  radius /= eps;
  double norm_sq = 0.0;
  for (int i = 0; i < k; i += 2) {
    auto [a, b] = rng.NormalPair();
    out[i] = a;
    norm_sq += a * a;
    if (i + 1 < k) {
      out[i + 1] = b;
      norm_sq += b * b;
    }
  }
  const double scale = radius / std::sqrt(norm_sq);
  for (int i = 0; i < k; ++i) out[i] *= scale;
}

double L1Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double L2Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

absl::StatusOr<double> Laplace1DLogDensity(double v, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", eps));
  }
  if (!std::isfinite(v)) {
    return absl::InvalidArgumentError("v must be finite");
  }
  return std::log(eps / 2.0) - eps * std::abs(v);
}

void SampleInto(const MechanismSpec& spec, Rng& rng, std::span<double> out) {
  const double eps = spec.epsilon();
  switch (spec.kind()) {
    case MechanismKind::kLaplace1D:
    case MechanismKind::kProductL1:
      for (double& x : out) x = SignedExponential(rng) / eps;
      return;
    case MechanismKind::kRadialL2:
    case MechanismKind::kComposite: {
      const int k = spec.BlockSize();
      for (int b = 0; b < spec.BlockCount(); ++b) {
        SampleRadialBlock(k, eps, rng, out.data() + b * k);
      }
      return;
    }
  }
}

NoiseVector Sample(const MechanismSpec& spec, Rng& rng) {
  NoiseVector v(spec.Dimension());
  SampleInto(spec, rng, v);
  return v;
}

double TheoreticalMse(const MechanismSpec& spec) {
  const double eps_sq = spec.epsilon() * spec.epsilon();
  const double n = spec.params().n;
  const double m = spec.params().m;
  switch (spec.kind()) {
    case MechanismKind::kLaplace1D:
      return 2.0 / eps_sq;
    case MechanismKind::kProductL1:
      return 2.0 * n / eps_sq;
    case MechanismKind::kRadialL2:
      return n * (n + 1.0) / eps_sq;
    case MechanismKind::kComposite:
      return n * m * (m + 1.0) / eps_sq;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double L2LogNormalization(int n, double eps) {
  const double dn = n;
  return dn * std::log(eps) + std::lgamma(dn / 2.0 + 1.0) -
         (dn / 2.0) * std::log(std::numbers::pi) - std::lgamma(dn + 1.0);
}

absl::StatusOr<double> L2Normalization(int n, double eps) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension must be at least 1, got ", n));
  }
  if (!(eps > 0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", eps));
  }
  if (n > 64) {
    return absl::OutOfRangeError(absl::StrCat(
        "l2 normalization supported for n <= 64, got ", n,
        "; use L2LogNormalization"));
  }
  const double value = std::exp(L2LogNormalization(n, eps));
  if (!std::isnormal(value)) {
    return absl::OutOfRangeError(absl::StrCat(
        "l2 normalization for n = ", n, ", eps = ", eps,
        " is outside the double range; use L2LogNormalization"));
  }
  return value;
}

DensityModel MechanismDensity(const MechanismSpec& spec) {
  const double eps = spec.epsilon();
  DensityModel model;
  model.name = std::string(MechanismKindName(spec.kind()));
  model.dimension = spec.Dimension();
  switch (spec.kind()) {
    case MechanismKind::kLaplace1D:
    case MechanismKind::kProductL1: {
      const double log_c = model.dimension * std::log(eps / 2.0);
      model.log_normalization = log_c;
      model.log_density = [log_c, eps](std::span<const double> v) {
        return log_c - eps * L1Norm(v);
      };
      break;
    }
    case MechanismKind::kRadialL2: {
      const double log_c = L2LogNormalization(spec.params().n, eps);
      model.log_normalization = log_c;
      model.log_density = [log_c, eps](std::span<const double> v) {
        return log_c - eps * L2Norm(v);
      };
      break;
    }
    case MechanismKind::kComposite: {
      const int blocks = spec.params().n;
      const int k = spec.params().m;
      const double log_c = blocks * L2LogNormalization(k, eps);
      model.log_normalization = log_c;
      model.log_density = [log_c, eps, blocks, k](std::span<const double> v) {
        double shape = 0.0;
        for (int b = 0; b < blocks; ++b) shape += L2Norm(v.subspan(b * k, k));
        return log_c - eps * shape;
      };
      break;
    }
  }
  model.normalization_constant = std::exp(model.log_normalization);
  return model;
}

DensityModel GaussianDensity(int dimension, double eps) {
  DensityModel model;
  model.name = "gaussian";
  model.dimension = dimension;
  const double log_c =
      0.5 * dimension * (2.0 * std::log(eps) - std::log(2.0 * std::numbers::pi));
  model.log_normalization = log_c;
  model.normalization_constant = std::exp(log_c);
  const double half_eps_sq = 0.5 * eps * eps;
  model.log_density = [log_c, half_eps_sq](std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return log_c - half_eps_sq * sq;
  };
  return model;
}

absl::StatusOr<DiscretizedDensity> ExpMechanismDensity1D(
    const ScoreFunction& score, double eps, double u, const Grid1D& grid) {
  if (!(eps > 0) || !std::isfinite(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", eps));
  }
  const int size = grid.size();
  std::vector<double> log_unnormalized(size);
  double max_log = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < size; ++i) {
    const double s = score(u, grid.Point(i));
    if (!std::isfinite(s)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "score is not finite at y = ", grid.Point(i)));
    }
    log_unnormalized[i] = eps * s;
    max_log = std::max(max_log, log_unnormalized[i]);
  }
  // Trapezoid mass of exp(log_unnormalized - max_log).
  double scaled_mass = 0.0;
  for (int i = 0; i < size; ++i) {
    const double w = (i == 0 || i == size - 1) ? 0.5 : 1.0;
    scaled_mass += w * std::exp(log_unnormalized[i] - max_log);
  }
  scaled_mass *= grid.step();
  const double log_mass = max_log + std::log(scaled_mass);
  if (!std::isfinite(log_mass) || !(scaled_mass > 0)) {
    return absl::InvalidArgumentError(
        "exponential mechanism density is not normalizable on the grid");
  }

  std::vector<double> log_density(size);
  std::vector<double> density(size);
  for (int i = 0; i < size; ++i) {
    log_density[i] = log_unnormalized[i] - log_mass;
    density[i] = std::exp(log_density[i]);
  }

  DensityModel model;
  model.name = "exp_mechanism";
  model.dimension = 1;
  model.log_normalization = -log_mass;
  model.normalization_constant = std::exp(-log_mass);
  model.log_density = [grid, values = log_density](std::span<const double> v) {
    const double y = v[0];
    if (!(y >= grid.lo() && y <= grid.hi())) {
      return -std::numeric_limits<double>::infinity();
    }
    const double pos = (y - grid.lo()) / grid.step();
    int i = static_cast<int>(std::floor(pos));
    i = std::clamp(i, 0, grid.size() - 2);
    const double t = pos - i;
    return (1.0 - t) * values[i] + t * values[i + 1];
  };
  return DiscretizedDensity{grid, std::move(density), std::move(model)};
}

}  // namespace lipdp
