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

#ifndef LIPDP_PRIVACY_PARAMS_H_
#define LIPDP_PRIVACY_PARAMS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace lipdp {

// Metric on the private data space. kComposite is the per-user sum of
// block l2 norms, sum_i ||u_i - u'_i||_2.
enum class Adjacency { kL1, kL2, kComposite };

enum class MechanismKind { kLaplace1D, kProductL1, kRadialL2, kComposite };

std::string_view AdjacencyName(Adjacency adjacency);
absl::StatusOr<Adjacency> ParseAdjacency(std::string_view name);
std::string_view MechanismKindName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name);

struct PrivacyParams {
  // Privacy level, in units of 1/distance.
  double epsilon = 1.0;
  Adjacency adjacency = Adjacency::kL1;
  // Number of users (blocks).
  int n = 1;
  // Dimensions per user. 1 unless the adjacency is kComposite.
  int m = 1;
  // Adjacency radius. Only the DP-ratio audits read it.
  std::optional<double> alpha = std::nullopt;
};

absl::Status ValidatePrivacyParams(const PrivacyParams& params);

// An additive, input-independent noise mechanism Qu = u + V. Instances are
// only created through the factories, which enforce the shape invariants:
//   kLaplace1D   n = m = 1
//   kProductL1   n coordinates, m = 1
//   kRadialL2    one block of dimension n, m = 1
//   kComposite   n blocks of dimension m
class MechanismSpec {
 public:
  static absl::StatusOr<MechanismSpec> Create(MechanismKind kind,
                                              const PrivacyParams& params);
  static absl::StatusOr<MechanismSpec> Laplace1D(double epsilon);
  static absl::StatusOr<MechanismSpec> ProductL1(double epsilon, int n);
  static absl::StatusOr<MechanismSpec> RadialL2(double epsilon, int n);
  static absl::StatusOr<MechanismSpec> Composite(double epsilon, int n, int m);

  MechanismKind kind() const { return kind_; }
  const PrivacyParams& params() const { return params_; }
  double epsilon() const { return params_.epsilon; }

  // Length of a noise vector.
  int Dimension() const { return params_.n * params_.m; }
  // Number of independent radial blocks and their size. ProductL1 and
  // Laplace1D report n blocks of size 1.
  int BlockCount() const;
  int BlockSize() const;

  // Same mechanism at a different privacy level.
  MechanismSpec WithEpsilon(double epsilon) const;

 private:
  MechanismSpec(MechanismKind kind, PrivacyParams params)
      : kind_(kind), params_(params) {}

  MechanismKind kind_;
  PrivacyParams params_;
};

using NoiseVector = std::vector<double>;

// Norm of a vector under the given adjacency, with the block size used by
// kComposite.
double AdjacencyNorm(Adjacency adjacency, const double* v, int dimension,
                     int block_size);

}  // namespace lipdp

#endif  // LIPDP_PRIVACY_PARAMS_H_
