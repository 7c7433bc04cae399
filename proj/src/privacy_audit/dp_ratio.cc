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
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed-form comparisons allow only floating-point rounding.
double RoundingSlack(double bound) { return 1e-12 * (1.0 + bound); }

absl::Status CheckPairs(const MechanismSpec& spec,
                        const std::vector<InputPair>& pairs) {
  for (const InputPair& p : pairs) {
    if (static_cast<int>(p.u.size()) != spec.Dimension() ||
        static_cast<int>(p.u_prime.size()) != spec.Dimension()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "input pair dimension does not match mechanism dimension ",
          spec.Dimension()));
    }
  }
  return absl::OkStatus();
}

// Compares two probability estimates from `trials` draws. Returns the point
// log-ratio and its lower confidence bound.
struct RatioEstimate {
  double point = 0.0;
  double lower = 0.0;
};

RatioEstimate CompareCounts(int64_t c, int64_t c_prime, int64_t trials,
                            double z) {
  const double n = static_cast<double>(trials);
  const double point = std::abs(std::log(c / n) - std::log(c_prime / n));
  const ProbabilityInterval a = WilsonInterval(c, trials, z);
  const ProbabilityInterval b = WilsonInterval(c_prime, trials, z);
  const double lower = c >= c_prime ? std::log(a.lo) - std::log(b.hi)
                                    : std::log(b.lo) - std::log(a.hi);
  return {point, std::max(0.0, lower)};
}

std::vector<InputPair> ResolvePairs(const MechanismSpec& spec, double alpha,
                                    const std::vector<InputPair>& given,
                                    int random_pairs, Rng& rng) {
  if (!given.empty()) return given;
  return DefaultInputPairs(spec, alpha, random_pairs, rng);
}

}  // namespace

bool Box::Contains(std::span<const double> x) const {
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

std::vector<Box> DefaultSetFamily(const MechanismSpec& spec, int random_sets,
                                  bool half_spaces, Rng& rng) {
  const int d = spec.Dimension();
  const double scale = 1.0 / spec.epsilon();
  std::vector<Box> sets;
  for (int s = 0; s < random_sets; ++s) {
    Box box{std::vector<double>(d), std::vector<double>(d)};
    for (int j = 0; j < d; ++j) {
      const double center = (6.0 * rng.Uniform() - 3.0) * scale;
      const double half_width = (0.2 + 2.8 * rng.Uniform()) * scale;
      box.lo[j] = center - half_width;
      box.hi[j] = center + half_width;
    }
    sets.push_back(std::move(box));
  }
  if (half_spaces) {
    for (int axis = 0; axis < d; ++axis) {
      for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        Box below{std::vector<double>(d, -kInf), std::vector<double>(d, kInf)};
        Box above = below;
        below.hi[axis] = t * scale;
        above.lo[axis] = t * scale;
        sets.push_back(std::move(below));
        sets.push_back(std::move(above));
      }
    }
  }
  return sets;
}

std::vector<InputPair> DefaultInputPairs(const MechanismSpec& spec,
                                         double alpha, int random_pairs,
                                         Rng& rng) {
  const int d = spec.Dimension();
  const Adjacency adjacency = spec.params().adjacency;
  std::vector<InputPair> pairs;
  for (double sign : {1.0, -1.0}) {
    InputPair p{NoiseVector(d, 0.0), NoiseVector(d, 0.0)};
    p.u_prime[0] = sign * alpha;
    pairs.push_back(std::move(p));
  }
  if (d > 1) {
    for (int k = 0; k < random_pairs; ++k) {
      NoiseVector w(d);
      for (int j = 0; j < d; j += 2) {
        auto [a, b] = rng.NormalPair();
        w[j] = a;
        if (j + 1 < d) w[j + 1] = b;
      }
      const double norm =
          AdjacencyNorm(adjacency, w.data(), d, spec.BlockSize());
      for (double& x : w) x *= alpha / norm;
      pairs.push_back(InputPair{NoiseVector(d, 0.0), std::move(w)});
    }
  }
  return pairs;
}

std::optional<double> ClosedFormLogProbability(const MechanismSpec& spec,
                                               std::span<const double> u,
                                               const Box& set) {
  // Every one-dimensional mechanism is Laplace(1/eps); ProductL1 factorizes.
  if (spec.Dimension() != 1 && spec.kind() != MechanismKind::kProductL1) {
    return std::nullopt;
  }
  double total = 0.0;
  for (size_t j = 0; j < u.size(); ++j) {
    total += LaplaceLogIntervalProbability(set.lo[j] - u[j], set.hi[j] - u[j],
                                           spec.epsilon());
  }
  return total;
}

absl::StatusOr<AuditReport> AuditDpRatio(const MechanismSpec& spec,
                                         const DpRatioOptions& options) {
  if (!(options.alpha >= 0) || !std::isfinite(options.alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be non-negative, got ", options.alpha));
  }
  Rng rng(options.seed, 0);
  std::vector<Box> sets = options.sets;
  if (sets.empty()) {
    sets = DefaultSetFamily(spec, options.random_sets, options.half_spaces, rng);
  }
  if (sets.empty()) {
    return absl::InvalidArgumentError("DP-ratio audit needs a non-empty set family");
  }
  for (const Box& b : sets) {
    if (static_cast<int>(b.lo.size()) != spec.Dimension() ||
        static_cast<int>(b.hi.size()) != spec.Dimension()) {
      return absl::InvalidArgumentError("set dimension does not match mechanism");
    }
  }
  const std::vector<InputPair> pairs =
      ResolvePairs(spec, options.alpha, options.pairs, options.random_pairs, rng);
  if (absl::Status s = CheckPairs(spec, pairs); !s.ok()) return s;

  AuditReport report;
  report.audit = "dp_ratio";
  report.subject = std::string(MechanismKindName(spec.kind()));
  report.target_eps = spec.epsilon();
  const double bound = options.alpha * spec.epsilon();
  bool pass = true;
  int skipped = 0;

  if (ClosedFormLogProbability(spec, pairs[0].u, sets[0]).has_value()) {
    for (const InputPair& p : pairs) {
      for (const Box& s : sets) {
        const double a = *ClosedFormLogProbability(spec, p.u, s);
        const double b = *ClosedFormLogProbability(spec, p.u_prime, s);
        if (a == -kInf && b == -kInf) {
          ++skipped;
          continue;
        }
        const double ratio = std::abs(a - b);
        report.dp_ratio_max = std::max(report.dp_ratio_max, ratio);
        if (ratio > bound + RoundingSlack(bound)) pass = false;
      }
    }
    report.notes.push_back("closed-form CDF path");
  } else {
    const int d = spec.Dimension();
    const size_t num_sets = sets.size();
    // counts[(2 * pair + side) * num_sets + set]
    std::vector<int64_t> counts(2 * pairs.size() * num_sets, 0);
    std::vector<double> noise(d), point(d);
    Rng sampler = rng.Split(1);
    for (int64_t t = 0; t < options.trials; ++t) {
      SampleInto(spec, sampler, noise);
      for (size_t p = 0; p < pairs.size(); ++p) {
        for (int side = 0; side < 2; ++side) {
          const NoiseVector& base = side == 0 ? pairs[p].u : pairs[p].u_prime;
          for (int j = 0; j < d; ++j) point[j] = base[j] + noise[j];
          int64_t* row = &counts[(2 * p + side) * num_sets];
          for (size_t s = 0; s < num_sets; ++s) {
            if (sets[s].Contains(point)) ++row[s];
          }
        }
      }
    }
    const double comparisons = static_cast<double>(pairs.size() * num_sets);
    const double z =
        NormalQuantile(1.0 - (1.0 - options.confidence) / (4.0 * comparisons));
    for (size_t p = 0; p < pairs.size(); ++p) {
      for (size_t s = 0; s < num_sets; ++s) {
        const int64_t c = counts[(2 * p) * num_sets + s];
        const int64_t c_prime = counts[(2 * p + 1) * num_sets + s];
        if (c < options.min_count || c_prime < options.min_count) {
          ++skipped;
          continue;
        }
        const RatioEstimate r = CompareCounts(c, c_prime, options.trials, z);
        report.dp_ratio_max = std::max(report.dp_ratio_max, r.point);
        report.statistical_slack =
            std::max(report.statistical_slack, r.point - r.lower);
        if (r.lower > bound) pass = false;
      }
    }
    report.notes.push_back(absl::StrCat(
        "Monte Carlo path, ", options.trials, " trials, Wilson z = ", z));
  }
  if (skipped > 0) {
    report.skipped = skipped;
    report.notes.push_back(absl::StrCat(
        skipped, " set/pair comparisons skipped: too little probability mass"));
  }
  if (options.alpha > 0) {
    report.lipschitz_estimate = report.dp_ratio_max / options.alpha;
  }
  report.verdict = pass ? Verdict::kPass : Verdict::kFail;
  return report;
}

PostProcessMap SignMap() {
  PostProcessMap map;
  map.name = "sign";
  map.bins = 2;
  map.bin_of = [](std::span<const double> y) { return y[0] > 0 ? 1 : 0; };
  map.partitions_line = true;
  map.cut_points = {0.0};
  return map;
}

PostProcessMap ConstantMap() {
  PostProcessMap map;
  map.name = "constant";
  map.bins = 1;
  map.bin_of = [](std::span<const double>) { return 0; };
  map.partitions_line = true;
  return map;
}

PostProcessMap RoundingMap(int limit) {
  PostProcessMap map;
  map.name = "round";
  map.bins = 2 * limit + 1;
  map.bin_of = [limit](std::span<const double> y) {
    const double r = std::clamp(std::round(y[0]), -1.0 * limit, 1.0 * limit);
    return static_cast<int>(r) + limit;
  };
  map.partitions_line = true;
  for (int k = -limit; k < limit; ++k) map.cut_points.push_back(k + 0.5);
  return map;
}

absl::StatusOr<AuditReport> AuditPostProcessing(
    const MechanismSpec& spec, const PostProcessMap& map,
    const PostProcessOptions& options) {
  if (!(options.alpha > 0) || !std::isfinite(options.alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be positive, got ", options.alpha));
  }
  if (map.bins < 1 || !map.bin_of) {
    return absl::InvalidArgumentError("post-processing map needs >= 1 bin");
  }
  Rng rng(options.seed, 0);
  const std::vector<InputPair> pairs = ResolvePairs(
      spec, options.alpha, options.pairs, options.random_pairs, rng);
  if (absl::Status s = CheckPairs(spec, pairs); !s.ok()) return s;

  AuditReport report;
  report.audit = "postprocess";
  report.subject = absl::StrCat(std::string(MechanismKindName(spec.kind())), "/", map.name);
  report.target_eps = spec.epsilon();
  const int bins = map.bins;
  bool pass = true;
  int excluded = 0;
  double max_lower = 0.0;

  if (spec.Dimension() == 1 && map.partitions_line) {
    auto log_prob = [&](double u, int b) {
      const double lo = b == 0 ? -kInf : map.cut_points[b - 1];
      const double hi = b == bins - 1 ? kInf : map.cut_points[b];
      return LaplaceLogIntervalProbability(lo - u, hi - u, spec.epsilon());
    };
    for (const InputPair& p : pairs) {
      for (int b = 0; b < bins; ++b) {
        const double a = log_prob(p.u[0], b);
        const double c = log_prob(p.u_prime[0], b);
        if (a == -kInf || c == -kInf) {
          ++excluded;
          continue;
        }
        const double ratio = std::abs(a - c);
        report.dp_ratio_max = std::max(report.dp_ratio_max, ratio);
        max_lower = std::max(max_lower, ratio);
      }
    }
    report.notes.push_back("closed-form CDF path");
    const double bound = options.alpha * spec.epsilon();
    pass = max_lower <= bound + RoundingSlack(bound);
  } else {
    const int d = spec.Dimension();
    std::vector<int64_t> counts(2 * pairs.size() * bins, 0);
    std::vector<double> noise(d), point(d);
    Rng sampler = rng.Split(1);
    for (int64_t t = 0; t < options.trials; ++t) {
      SampleInto(spec, sampler, noise);
      for (size_t p = 0; p < pairs.size(); ++p) {
        for (int side = 0; side < 2; ++side) {
          const NoiseVector& base = side == 0 ? pairs[p].u : pairs[p].u_prime;
          for (int j = 0; j < d; ++j) point[j] = base[j] + noise[j];
          const int b = map.bin_of(point);
          if (b < 0 || b >= bins) {
            return absl::InvalidArgumentError(absl::StrCat(
                "post-processing map returned bin ", b, " outside [0, ", bins,
                ")"));
          }
          ++counts[(2 * p + side) * bins + b];
        }
      }
    }
    const double comparisons = static_cast<double>(pairs.size() * bins);
    const double z =
        NormalQuantile(1.0 - (1.0 - options.confidence) / (4.0 * comparisons));
    for (size_t p = 0; p < pairs.size(); ++p) {
      for (int b = 0; b < bins; ++b) {
        const int64_t c = counts[(2 * p) * bins + b];
        const int64_t c_prime = counts[(2 * p + 1) * bins + b];
        if (c < options.min_count || c_prime < options.min_count) {
          ++excluded;
          continue;
        }
        const RatioEstimate r = CompareCounts(c, c_prime, options.trials, z);
        report.dp_ratio_max = std::max(report.dp_ratio_max, r.point);
        report.statistical_slack =
            std::max(report.statistical_slack, r.point - r.lower);
        max_lower = std::max(max_lower, r.lower);
      }
    }
    report.notes.push_back(absl::StrCat(
        "Monte Carlo path, ", options.trials, " trials, Wilson z = ", z));
    pass = max_lower <= options.alpha * spec.epsilon();
  }
  if (excluded > 0) {
    report.skipped = excluded;
    report.notes.push_back(absl::StrCat(
        excluded, " bin/pair comparisons excluded: zero or too little mass"));
  }
  report.lipschitz_estimate = report.dp_ratio_max / options.alpha;
  report.verdict = pass ? Verdict::kPass : Verdict::kFail;
  return report;
}

}  // namespace lipdp
