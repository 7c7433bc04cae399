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

#include "lipdp/privacy_params.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace lipdp {

std::string_view AdjacencyName(Adjacency adjacency) {
  switch (adjacency) {
    case Adjacency::kL1:
      return "l1";
    case Adjacency::kL2:
      return "l2";
    case Adjacency::kComposite:
      return "composite";
  }
  return "unknown";
}

absl::StatusOr<Adjacency> ParseAdjacency(std::string_view name) {
  if (name == "l1") return Adjacency::kL1;
  if (name == "l2") return Adjacency::kL2;
  if (name == "composite") return Adjacency::kComposite;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown adjacency '", std::string(name), "'; valid: l1, l2, composite"));
}

std::string_view MechanismKindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kLaplace1D:
      return "laplace1d";
    case MechanismKind::kProductL1:
      return "l1";
    case MechanismKind::kRadialL2:
      return "l2";
    case MechanismKind::kComposite:
      return "composite";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name) {
  if (name == "laplace1d") return MechanismKind::kLaplace1D;
  if (name == "l1") return MechanismKind::kProductL1;
  if (name == "l2") return MechanismKind::kRadialL2;
  if (name == "composite") return MechanismKind::kComposite;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mechanism '", std::string(name), "'; valid: laplace1d, l1, l2, composite"));
}

absl::Status ValidatePrivacyParams(const PrivacyParams& params) {
  if (!(params.epsilon > 0) || !std::isfinite(params.epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ",
                     params.epsilon));
  }
  if (params.n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n must be at least 1, got ", params.n));
  }
  if (params.m < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("m must be at least 1, got ", params.m));
  }
  if (params.alpha.has_value() &&
      (!(*params.alpha > 0) || !std::isfinite(*params.alpha))) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be positive, got ", *params.alpha));
  }
  return absl::OkStatus();
}

absl::StatusOr<MechanismSpec> MechanismSpec::Create(
    MechanismKind kind, const PrivacyParams& params) {
  if (absl::Status s = ValidatePrivacyParams(params); !s.ok()) return s;
  switch (kind) {
    case MechanismKind::kLaplace1D:
      if (params.n * params.m != 1) {
        return absl::InvalidArgumentError(
            "laplace1d requires n = m = 1");
      }
      break;
    case MechanismKind::kProductL1:
      if (params.m != 1) {
        return absl::InvalidArgumentError("l1 mechanism requires m = 1");
      }
      if (params.adjacency != Adjacency::kL1) {
        return absl::InvalidArgumentError(
            "l1 mechanism requires l1 adjacency");
      }
      break;
    case MechanismKind::kRadialL2:
      if (params.m != 1) {
        return absl::InvalidArgumentError(
            "l2 mechanism is a single block of dimension n; set m = 1");
      }
      if (params.adjacency != Adjacency::kL2) {
        return absl::InvalidArgumentError(
            "l2 mechanism requires l2 adjacency");
      }
      break;
    case MechanismKind::kComposite:
      if (params.adjacency != Adjacency::kComposite) {
        return absl::InvalidArgumentError(
            "composite mechanism requires composite adjacency");
      }
      break;
  }
  return MechanismSpec(kind, params);
}

absl::StatusOr<MechanismSpec> MechanismSpec::Laplace1D(double epsilon) {
  return Create(MechanismKind::kLaplace1D,
                PrivacyParams{.epsilon = epsilon, .adjacency = Adjacency::kL1});
}

absl::StatusOr<MechanismSpec> MechanismSpec::ProductL1(double epsilon, int n) {
  return Create(
      MechanismKind::kProductL1,
      PrivacyParams{.epsilon = epsilon, .adjacency = Adjacency::kL1, .n = n});
}

absl::StatusOr<MechanismSpec> MechanismSpec::RadialL2(double epsilon, int n) {
  return Create(
      MechanismKind::kRadialL2,
      PrivacyParams{.epsilon = epsilon, .adjacency = Adjacency::kL2, .n = n});
}

absl::StatusOr<MechanismSpec> MechanismSpec::Composite(double epsilon, int n,
                                                       int m) {
  return Create(MechanismKind::kComposite,
                PrivacyParams{.epsilon = epsilon,
                              .adjacency = Adjacency::kComposite,
                              .n = n,
                              .m = m});
}

int MechanismSpec::BlockCount() const {
  switch (kind_) {
    case MechanismKind::kRadialL2:
      return 1;
    default:
      return params_.n;
  }
}

int MechanismSpec::BlockSize() const {
  switch (kind_) {
    case MechanismKind::kRadialL2:
      return params_.n;
    case MechanismKind::kComposite:
      return params_.m;
    default:
      return 1;
  }
}

MechanismSpec MechanismSpec::WithEpsilon(double epsilon) const {
  PrivacyParams p = params_;
  p.epsilon = epsilon;
  return MechanismSpec(kind_, p);
}

double AdjacencyNorm(Adjacency adjacency, const double* v, int dimension,
                     int block_size) {
  double total = 0.0;
  switch (adjacency) {
    case Adjacency::kL1:
      for (int i = 0; i < dimension; ++i) total += std::abs(v[i]);
      return total;
    case Adjacency::kL2:
      for (int i = 0; i < dimension; ++i) total += v[i] * v[i];
      return std::sqrt(total);
    case Adjacency::kComposite:
      for (int b = 0; b < dimension; b += block_size) {
        double sq = 0.0;
        for (int j = 0; j < block_size; ++j) sq += v[b + j] * v[b + j];
        total += std::sqrt(sq);
      }
      return total;
  }
  return total;
}

}  // namespace lipdp
