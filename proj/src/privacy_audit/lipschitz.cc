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
#include <vector>

#include "absl/strings/str_cat.h"
#include "lipdp/audit.h"

namespace lipdp {
namespace {

struct ProbeResult {
  double gradient = 0.0;
  double chord = 0.0;
  int skipped = 0;
  int kinks = 0;

  double Max() const { return std::max(gradient, chord); }
};

double DualNorm(LipschitzNorm norm, int block_size, std::span<const double> g) {
  double result = 0.0;
  switch (norm) {
    case LipschitzNorm::kL1:
      for (double x : g) result = std::max(result, std::abs(x));
      return result;
    case LipschitzNorm::kL2:
      for (double x : g) result += x * x;
      return std::sqrt(result);
    case LipschitzNorm::kPerBlockL2:
      for (size_t b = 0; b < g.size(); b += block_size) {
        double sq = 0.0;
        for (int j = 0; j < block_size; ++j) sq += g[b + j] * g[b + j];
        result = std::max(result, std::sqrt(sq));
      }
      return result;
  }
  return result;
}

double PrimalNorm(LipschitzNorm norm, int block_size, std::span<const double> w) {
  switch (norm) {
    case LipschitzNorm::kL1:
      return AdjacencyNorm(Adjacency::kL1, w.data(), w.size(), 1);
    case LipschitzNorm::kL2:
      return AdjacencyNorm(Adjacency::kL2, w.data(), w.size(), 1);
    case LipschitzNorm::kPerBlockL2:
      return AdjacencyNorm(Adjacency::kComposite, w.data(), w.size(),
                           block_size);
  }
  return 0.0;
}

// Central difference along axis j with step h.
double CentralDifference(const DensityModel& model, std::vector<double>& x,
                         int j, double h) {
  const double center = x[j];
  x[j] = center + h;
  const double up = model.log_density(x);
  x[j] = center - h;
  const double down = model.log_density(x);
  x[j] = center;
  return (up - down) / (2.0 * h);
}

// Finite-difference gradient dual norm at x. Returns false when the probe
// must be excluded; `kink` tells whether the reason was an inconsistent
// difference quotient rather than a non-finite value.
bool GradientNorm(const DensityModel& model, const LipschitzProbeOptions& opt,
                  std::vector<double>& x, double& out, bool& kink) {
  std::vector<double> g(x.size());
  kink = false;
  for (size_t j = 0; j < x.size(); ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[j]));
    const double full = CentralDifference(model, x, j, h);
    const double half = CentralDifference(model, x, j, h / 2.0);
    if (!std::isfinite(full) || !std::isfinite(half)) return false;
    if (std::abs(full - half) > 1e-4 * std::max(1.0, std::abs(full))) {
      kink = true;
      return false;
    }
    g[j] = full;
  }
  out = DualNorm(opt.norm, opt.block_size, g);
  return true;
}

void AccumulateGradient(const DensityModel& model,
                        const LipschitzProbeOptions& opt,
                        std::vector<double>& x, ProbeResult& result) {
  double value = 0.0;
  bool kink = false;
  if (GradientNorm(model, opt, x, value, kink)) {
    result.gradient = std::max(result.gradient, value);
  } else if (kink) {
    ++result.kinks;
  } else {
    ++result.skipped;
  }
}

// Jittered grid on [-radius, radius] with the given spacing.
ProbeResult Probe1D(const DensityModel& model, const LipschitzProbeOptions& opt,
                    double radius, double spacing, Rng& rng) {
  ProbeResult result;
  const double offset = rng.Uniform() * spacing;
  std::vector<double> x(1);
  double prev_x = 0.0;
  double prev_l = 0.0;
  bool have_prev = false;
  const int count = static_cast<int>(std::floor((2.0 * radius - offset) / spacing));
  for (int i = 0; i <= count; ++i) {
    const double t = -radius + offset + i * spacing;
    x[0] = t;
    const double l = model.log_density(x);
    if (!std::isfinite(l)) {
      ++result.skipped;
      have_prev = false;
      continue;
    }
    if (have_prev) {
      result.chord = std::max(result.chord, std::abs(l - prev_l) / (t - prev_x));
    }
    AccumulateGradient(model, opt, x, result);
    prev_x = t;
    prev_l = l;
    have_prev = true;
  }
  return result;
}

// Uniform random probes in the box, with one random chord each.
ProbeResult ProbeND(const DensityModel& model, const LipschitzProbeOptions& opt,
                    double radius, double spacing, Rng& rng) {
  ProbeResult result;
  const int d = model.dimension;
  std::vector<double> x(d), y(d), w(d);
  for (int p = 0; p < opt.probes; ++p) {
    for (int j = 0; j < d; ++j) x[j] = (2.0 * rng.Uniform() - 1.0) * radius;
    for (int j = 0; j < d; j += 2) {
      auto [a, b] = rng.NormalPair();
      w[j] = a;
      if (j + 1 < d) w[j + 1] = b;
    }
    const double wn = PrimalNorm(opt.norm, opt.block_size, w);
    for (int j = 0; j < d; ++j) y[j] = x[j] + spacing * w[j] / wn;

    const double lx = model.log_density(x);
    const double ly = model.log_density(y);
    if (!std::isfinite(lx) || !std::isfinite(ly)) {
      ++result.skipped;
      continue;
    }
    result.chord = std::max(result.chord, std::abs(ly - lx) / spacing);
    AccumulateGradient(model, opt, x, result);
  }
  return result;
}

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kDivergent:
      return "divergent";
  }
  return "unknown";
}

LipschitzNorm NormForAdjacency(Adjacency adjacency) {
  switch (adjacency) {
    case Adjacency::kL1:
      return LipschitzNorm::kL1;
    case Adjacency::kL2:
      return LipschitzNorm::kL2;
    case Adjacency::kComposite:
      return LipschitzNorm::kPerBlockL2;
  }
  return LipschitzNorm::kL1;
}

LipschitzProbeOptions DefaultProbeOptions(const MechanismSpec& spec) {
  LipschitzProbeOptions options;
  options.norm = NormForAdjacency(spec.params().adjacency);
  options.block_size = spec.BlockSize();
  options.radius = 40.0 / spec.epsilon();
  options.spacing = 0.1 / spec.epsilon();
  return options;
}

LipschitzEstimate EstimateLipschitz(const DensityModel& model,
                                    const LipschitzProbeOptions& options) {
  Rng rng(options.seed, 0);
  LipschitzEstimate out;
  const bool one_d = model.dimension == 1;
  auto run = [&](double radius, double spacing) {
    return one_d ? Probe1D(model, options, radius, spacing, rng)
                 : ProbeND(model, options, radius, spacing, rng);
  };

  double spacing = options.spacing;
  ProbeResult finest;
  for (int level = 0; level < options.levels; ++level) {
    finest = run(options.radius, spacing);
    out.refinement_trend.push_back(finest.Max());
    out.skipped += finest.skipped;
    out.kinks += finest.kinks;
    if (level + 1 < options.levels) spacing /= options.refinement_factor;
  }
  out.estimate = finest.Max();

  for (double fraction : {0.25, 0.5}) {
    out.range_trend.push_back(run(options.radius * fraction, spacing).Max());
  }
  out.range_trend.push_back(finest.Max());

  const double first = out.refinement_trend.front();
  const double last = out.refinement_trend.back();
  out.divergent = last > 0 && last >= 4.0 * first;
  const auto& r = out.range_trend;
  out.unbounded = r[0] > 0 && r[1] >= 1.5 * r[0] && r[2] >= 1.5 * r[1];
  return out;
}

AuditReport AuditLipschitz(const DensityModel& model, double target_eps,
                           const LipschitzProbeOptions& options) {
  const LipschitzEstimate est = EstimateLipschitz(model, options);
  AuditReport report;
  report.audit = "lipschitz";
  report.subject = model.name;
  report.target_eps = target_eps;
  report.tolerance = options.tolerance;
  report.refinement_trend = est.refinement_trend;
  report.range_trend = est.range_trend;
  report.skipped = est.skipped;
  if (est.skipped > 0) {
    report.notes.push_back(absl::StrCat(
        est.skipped, " probes skipped: log-density not finite"));
  }
  if (est.kinks > 0) {
    report.notes.push_back(absl::StrCat(
        est.kinks, " gradient probes excluded: kink or jump inside the stencil"));
  }
  if (est.divergent) {
    report.verdict = Verdict::kDivergent;
    report.notes.push_back(
        "estimate grows under refinement: log-density is discontinuous");
    return report;
  }
  report.lipschitz_estimate = est.estimate;
  if (est.unbounded) {
    report.verdict = Verdict::kFail;
    report.notes.push_back(
        "estimate grows with the probe radius: gradient is unbounded");
    return report;
  }
  report.verdict = est.estimate <= target_eps * (1.0 + options.tolerance)
                       ? Verdict::kPass
                       : Verdict::kFail;
  return report;
}

}  // namespace lipdp
