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

#ifndef LIPDP_AUDIT_H_
#define LIPDP_AUDIT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "lipdp/density.h"
#include "lipdp/mechanisms.h"
#include "lipdp/privacy_params.h"
#include "lipdp/rng.h"
#include "lipdp/statistics.h"

namespace lipdp {

enum class Verdict { kPass, kFail, kDivergent };

std::string_view VerdictName(Verdict verdict);

struct GofStatistic {
  double statistic = 0.0;
  double threshold = 0.0;
};

struct AuditReport {
  std::string audit;
  std::string subject;
  // Absent when the estimate diverges under refinement.
  std::optional<double> lipschitz_estimate;
  double target_eps = 0.0;
  double tolerance = 0.0;
  // Largest |ln P(Qu in S) - ln P(Qu' in S)| observed.
  double dp_ratio_max = 0.0;
  // Allowance added to the bound for sampling error (0 on exact paths).
  double statistical_slack = 0.0;
  std::map<std::string, GofStatistic> gof_statistics;
  std::vector<double> refinement_trend;
  std::vector<double> range_trend;
  int skipped = 0;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::kFail;
};

// ---------------------------------------------------------------------------
// Lipschitz constant of a log-density.

enum class LipschitzNorm { kL1, kL2, kPerBlockL2 };

LipschitzNorm NormForAdjacency(Adjacency adjacency);

struct LipschitzProbeOptions {
  // Norm on the input space; gradients are measured in its dual norm.
  LipschitzNorm norm = LipschitzNorm::kL1;
  int block_size = 1;
  // Probes lie in [-radius, radius]^d.
  double radius = 40.0;
  // Chord length at the coarsest level; each level divides it by
  // refinement_factor.
  double spacing = 0.1;
  double refinement_factor = 10.0;
  int levels = 3;
  // Random probes per level when d > 1 (1D uses a jittered grid).
  int probes = 2000;
  uint64_t seed = 0;
  double tolerance = 1e-3;
};

// Probe options matched to a mechanism: its adjacency norm, radius 40/eps,
// spacing 0.1/eps.
LipschitzProbeOptions DefaultProbeOptions(const MechanismSpec& spec);

struct LipschitzEstimate {
  double estimate = 0.0;
  // Estimate at each refinement level over the full radius.
  std::vector<double> refinement_trend;
  // Estimate at the finest level over radius/4, radius/2, radius.
  std::vector<double> range_trend;
  int skipped = 0;
  // Gradient probes dropped because the difference quotient was unstable.
  int kinks = 0;
  bool divergent = false;
  bool unbounded = false;
};

// Supremum over probes of (a) the dual norm of the central finite-difference
// gradient of the log-density, step 1e-5 * max(1, |x_j|), and (b) chord
// quotients |l(x + t w) - l(x)| / t with ||w|| = 1. Probes whose difference
// quotient changes between h and h/2 (a kink or jump inside the stencil) are
// skipped for (a); non-finite log-densities are skipped and counted.
// Divergent: the finest level is >= 4x the coarsest. Unbounded: the range
// trend grows >= 1.5x per doubling of the radius.
LipschitzEstimate EstimateLipschitz(const DensityModel& model,
                                    const LipschitzProbeOptions& options);

// Pass iff bounded, not divergent and estimate <= target_eps (1 + tolerance).
AuditReport AuditLipschitz(const DensityModel& model, double target_eps,
                           const LipschitzProbeOptions& options);

// ---------------------------------------------------------------------------
// Differential-privacy ratios.

// Axis-aligned box; bounds may be infinite, so half-spaces are boxes too.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  bool Contains(std::span<const double> x) const;
};

struct InputPair {
  NoiseVector u;
  NoiseVector u_prime;
};

// 64 (by default) random boxes plus the coordinate half-spaces
// {x_a <= t} and {x_a > t}, t in {-2, -1, 0, 1, 2} / eps.
std::vector<Box> DefaultSetFamily(const MechanismSpec& spec, int random_sets,
                                  bool half_spaces, Rng& rng);

// u = 0 against u' = alpha * w for w = +-e_1 and `random_pairs` random
// directions, each with adjacency norm 1.
std::vector<InputPair> DefaultInputPairs(const MechanismSpec& spec,
                                         double alpha, int random_pairs,
                                         Rng& rng);

// ln P(u + V in S) in closed form for Laplace1D and ProductL1; nullopt for
// the radial mechanisms.
std::optional<double> ClosedFormLogProbability(const MechanismSpec& spec,
                                               std::span<const double> u,
                                               const Box& set);

struct DpRatioOptions {
  double alpha = 1.0;
  // Empty: DefaultSetFamily(random_sets, half_spaces).
  std::vector<Box> sets;
  int random_sets = 64;
  bool half_spaces = true;
  // Empty: DefaultInputPairs(random_pairs).
  std::vector<InputPair> pairs;
  int random_pairs = 4;
  // Monte Carlo path only.
  int64_t trials = 200000;
  int64_t min_count = 20;
  double confidence = 0.99;
  uint64_t seed = 0;
};

// Max over pairs and sets of the absolute log-probability ratio. Closed-form
// CDFs are used when available; otherwise Monte Carlo with Wilson intervals
// at the given family-wise confidence (Bonferroni over all comparisons).
// Pass iff every ratio is <= alpha * eps + slack.
absl::StatusOr<AuditReport> AuditDpRatio(const MechanismSpec& spec,
                                         const DpRatioOptions& options);

// ---------------------------------------------------------------------------
// Post-processing.

struct PostProcessMap {
  std::string name;
  int bins = 1;
  std::function<int(std::span<const double>)> bin_of;
  // Set for 1D maps that partition the line into intervals: bin b is
  // (cut[b - 1], cut[b]]. Enables the closed-form path.
  bool partitions_line = false;
  std::vector<double> cut_points;
};

PostProcessMap SignMap();
PostProcessMap ConstantMap();
// Nearest integer, clamped to [-limit, limit]; 2 * limit + 1 bins.
PostProcessMap RoundingMap(int limit);

struct PostProcessOptions {
  double alpha = 1.0;
  std::vector<InputPair> pairs;  // empty: DefaultInputPairs
  int random_pairs = 4;
  int64_t trials = 200000;
  int64_t min_count = 20;
  double confidence = 0.99;
  uint64_t seed = 0;
};

// Per-bin log-probability ratios of f(u + V) across input pairs, divided by
// alpha. Pass iff <= eps + slack / alpha. Bins with too little mass under
// either input are excluded with a note.
absl::StatusOr<AuditReport> AuditPostProcessing(
    const MechanismSpec& spec, const PostProcessMap& map,
    const PostProcessOptions& options);

// ---------------------------------------------------------------------------
// CDF Lipschitz property of a 1D noise distribution.

// Checks |G_N(x) - G_N(y)| <= eps |x - y| + 2 * DKW half-width over all probe
// pairs, with G_N the empirical CDF of `samples`.
AuditReport AuditCdfLipschitz(std::span<const double> samples, double eps,
                              const Grid1D& probes, double confidence = 0.99);

absl::StatusOr<AuditReport> AuditCdfLipschitz(const MechanismSpec& spec,
                                              const Grid1D& probes,
                                              int64_t trials, Rng& rng);

AuditReport AuditCdfLipschitz(const StaircaseControl& control,
                              const Grid1D& probes, int64_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Monte Carlo accuracy and goodness of fit.

// Mean of ||V||_2^2 with its standard error. Requires trials >= 1000.
absl::StatusOr<MeanEstimate> EmpiricalMse(const MechanismSpec& spec,
                                          int64_t trials, Rng& rng);

// KS test of ||V||_2 against Gamma(n, 1/eps) at level `significance`.
// Requires at least 1e4 samples, each of length n.
absl::StatusOr<AuditReport> AuditRadialGof(std::span<const NoiseVector> samples,
                                           int n, double eps,
                                           double significance = 0.01);

// ---------------------------------------------------------------------------
// Serialization.

// Flat JSON object: scalar fields and arrays only. Each GoF entry becomes
// "gof_<name>_statistic" and "gof_<name>_threshold"; a divergent estimate is
// written as null with "divergent": true.
std::string AuditReportToJson(const AuditReport& report);
absl::StatusOr<AuditReport> AuditReportFromJson(std::string_view text);

}  // namespace lipdp

#endif  // LIPDP_AUDIT_H_
