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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "lipdp/audit.h"

namespace lipdp {

AuditReport AuditCdfLipschitz(std::span<const double> samples, double eps,
                              const Grid1D& probes, double confidence) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const std::vector<double> x = probes.Points();
  std::vector<double> g(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    g[i] = (std::upper_bound(sorted.begin(), sorted.end(), x[i]) -
            sorted.begin()) /
           n;
  }

  AuditReport report;
  report.audit = "cdf";
  report.target_eps = eps;
  // The DKW band holds for all x simultaneously, so differences see twice it.
  report.statistical_slack =
      2.0 * DkwHalfWidth(static_cast<int64_t>(sorted.size()), 1.0 - confidence);
  double worst_excess = -std::numeric_limits<double>::infinity();
  double steepest = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      const double rise = std::abs(g[j] - g[i]);
      const double run = x[j] - x[i];
      worst_excess = std::max(worst_excess, rise - eps * run);
      if (j == i + 1) steepest = std::max(steepest, rise / run);
    }
  }
  report.lipschitz_estimate = steepest;
  report.notes.push_back(absl::StrCat(
      "largest |G(x) - G(y)| - eps |x - y| over probe pairs: ", worst_excess));
  report.verdict = worst_excess <= report.statistical_slack ? Verdict::kPass
                                                            : Verdict::kFail;
  return report;
}

absl::StatusOr<AuditReport> AuditCdfLipschitz(const MechanismSpec& spec,
                                              const Grid1D& probes,
                                              int64_t trials, Rng& rng) {
  if (spec.Dimension() != 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "CDF audit needs a one-dimensional mechanism, got dimension ",
        spec.Dimension()));
  }
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  std::vector<double> samples(trials);
  for (double& s : samples) SampleInto(spec, rng, std::span<double>(&s, 1));
  AuditReport report = AuditCdfLipschitz(samples, spec.epsilon(), probes);
  report.subject = std::string(MechanismKindName(spec.kind()));
  return report;
}

AuditReport AuditCdfLipschitz(const StaircaseControl& control,
                              const Grid1D& probes, int64_t trials, Rng& rng) {
  std::vector<double> samples(std::max<int64_t>(trials, 1));
  for (double& s : samples) s = control.Sample(rng);
  AuditReport report = AuditCdfLipschitz(samples, control.epsilon(), probes);
  report.subject = "staircase";
  return report;
}

absl::StatusOr<MeanEstimate> EmpiricalMse(const MechanismSpec& spec,
                                          int64_t trials, Rng& rng) {
  if (trials < 1000) {
    return absl::InvalidArgumentError(
        absl::StrCat("empirical MSE needs at least 1000 trials, got ", trials));
  }
  std::vector<double> v(spec.Dimension());
  RunningMoments moments;
  for (int64_t t = 0; t < trials; ++t) {
    SampleInto(spec, rng, v);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    moments.Add(sq);
  }
  return moments.Estimate();
}

absl::StatusOr<AuditReport> AuditRadialGof(std::span<const NoiseVector> samples,
                                           int n, double eps,
                                           double significance) {
  if (n < 1 || !(eps > 0)) {
    return absl::InvalidArgumentError("radial GoF needs n >= 1 and eps > 0");
  }
  if (samples.size() < 10000) {
    return absl::InvalidArgumentError(absl::StrCat(
        "radial GoF needs at least 10000 samples, got ", samples.size()));
  }
  std::vector<double> radii;
  radii.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    if (static_cast<int>(samples[i].size()) != n) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample ", i, " has length ", samples[i].size(),
                       ", expected ", n));
    }
    double sq = 0.0;
    for (double x : samples[i]) sq += x * x;
    radii.push_back(std::sqrt(sq));
  }
  const double count = static_cast<double>(radii.size());
  const double d =
      KsStatistic(std::move(radii), [n, eps](double r) { return GammaCdf(n, eps, r); });
  AuditReport report;
  report.audit = "gof";
  report.subject = absl::StrCat("radial_l2/n=", n);
  report.target_eps = eps;
  const double threshold = KolmogorovCriticalValue(significance) / std::sqrt(count);
  report.gof_statistics["ks_gamma"] = {d, threshold};
  report.verdict = d < threshold ? Verdict::kPass : Verdict::kFail;
  return report;
}

}  // namespace lipdp
