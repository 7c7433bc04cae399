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
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "lipdp/density.h"
#include "lipdp/mechanisms.h"
#include "lipdp/privacy_params.h"
#include "lipdp/quadrature.h"
#include "lipdp/rng.h"
#include "lipdp/statistics.h"
#include "oracles.h"

namespace lipdp {
namespace {

MechanismSpec Make(MechanismKind kind, double eps, int n = 1, int m = 1) {
  switch (kind) {
    case MechanismKind::kLaplace1D:
      return *MechanismSpec::Laplace1D(eps);
    case MechanismKind::kProductL1:
      return *MechanismSpec::ProductL1(eps, n);
    case MechanismKind::kRadialL2:
      return *MechanismSpec::RadialL2(eps, n);
    case MechanismKind::kComposite:
      return *MechanismSpec::Composite(eps, n, m);
  }
  return *MechanismSpec::Laplace1D(eps);
}

double SquaredNorm(const NoiseVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

MeanEstimate MonteCarloMse(const MechanismSpec& spec, int64_t trials,
                           uint64_t seed) {
  Rng rng(seed, 11);
  RunningMoments moments;
  NoiseVector v(spec.Dimension());
  for (int64_t t = 0; t < trials; ++t) {
    SampleInto(spec, rng, v);
    moments.Add(SquaredNorm(v));
  }
  return moments.Estimate();
}

TEST(PrivacyParams, RejectsInvalidParameters) {
  EXPECT_FALSE(MechanismSpec::Laplace1D(0.0).ok());
  EXPECT_FALSE(MechanismSpec::Laplace1D(-1.0).ok());
  EXPECT_FALSE(MechanismSpec::Laplace1D(std::nan("")).ok());
  EXPECT_FALSE(MechanismSpec::ProductL1(1.0, 0).ok());
  EXPECT_FALSE(MechanismSpec::Composite(1.0, 2, 0).ok());
  PrivacyParams p;
  p.n = 2;
  EXPECT_FALSE(MechanismSpec::Create(MechanismKind::kLaplace1D, p).ok());
  p.alpha = -1.0;
  EXPECT_FALSE(ValidatePrivacyParams(p).ok());
}

TEST(PrivacyParams, ShapesOfEachKind) {
  const MechanismSpec c = Make(MechanismKind::kComposite, 1.0, 2, 3);
  EXPECT_EQ(c.Dimension(), 6);
  EXPECT_EQ(c.BlockCount(), 2);
  EXPECT_EQ(c.BlockSize(), 3);
  const MechanismSpec r = Make(MechanismKind::kRadialL2, 1.0, 4);
  EXPECT_EQ(r.BlockCount(), 1);
  EXPECT_EQ(r.BlockSize(), 4);
  const MechanismSpec l = Make(MechanismKind::kProductL1, 1.0, 5);
  EXPECT_EQ(l.BlockCount(), 5);
  EXPECT_EQ(l.BlockSize(), 1);
  EXPECT_DOUBLE_EQ(l.WithEpsilon(3.0).epsilon(), 3.0);
}

TEST(Laplace1DLogDensity, Examples) {
  EXPECT_NEAR(*Laplace1DLogDensity(0.0, 1.0), -0.693147, 1e-6);
  EXPECT_DOUBLE_EQ(*Laplace1DLogDensity(0.0, 2.0), 0.0);
  EXPECT_NEAR(*Laplace1DLogDensity(3.0, 1.0), -3.693147, 1e-6);
  for (double v : {-7.5, -0.25, 0.0, 1.0, 12.0}) {
    for (double eps : {0.1, 1.0, 4.0}) {
      EXPECT_NEAR(*Laplace1DLogDensity(v, eps), oracle::LaplaceLogDensity(v, eps),
                  1e-14);
    }
  }
  EXPECT_FALSE(Laplace1DLogDensity(1.0, 0.0).ok());
  EXPECT_FALSE(Laplace1DLogDensity(1.0, -2.0).ok());
}

TEST(TheoreticalMse, Examples) {
  EXPECT_DOUBLE_EQ(TheoreticalMse(Make(MechanismKind::kLaplace1D, 1.0)), 2.0);
  EXPECT_DOUBLE_EQ(TheoreticalMse(Make(MechanismKind::kRadialL2, 2.0, 3)), 3.0);
  EXPECT_DOUBLE_EQ(TheoreticalMse(Make(MechanismKind::kComposite, 1.0, 2, 3)),
                   24.0);
  EXPECT_DOUBLE_EQ(TheoreticalMse(Make(MechanismKind::kProductL1, 0.5, 5)), 40.0);
}

TEST(TheoreticalMse, ScalesAsInverseSquare) {
  for (MechanismKind kind : {MechanismKind::kLaplace1D, MechanismKind::kProductL1,
                             MechanismKind::kRadialL2, MechanismKind::kComposite}) {
    const int n = kind == MechanismKind::kLaplace1D ? 1 : 3;
    const MechanismSpec base = Make(kind, 0.7, n, 2);
    for (double k : {0.5, 2.0, 3.0}) {
      EXPECT_NEAR(TheoreticalMse(base.WithEpsilon(0.7 * k)),
                  TheoreticalMse(base) / (k * k),
                  1e-14 * TheoreticalMse(base));
    }
  }
}

TEST(L2Normalization, Examples) {
  for (double eps : {0.3, 1.0, 2.0, 7.0}) {
    EXPECT_EQ(*L2Normalization(1, eps), eps / 2.0);
  }
  EXPECT_NEAR(*L2Normalization(2, 1.0), 1.0 / (2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(*L2Normalization(2, 1.0), 0.159155, 1e-6);
}

TEST(L2Normalization, MatchesGammaFormulaAndLogForm) {
  for (int n = 1; n <= 30; ++n) {
    for (double eps : {0.5, 1.0, 3.0}) {
      const double want = oracle::L2Constant(n, eps);
      EXPECT_NEAR(*L2Normalization(n, eps), want, 1e-12 * want) << n;
      EXPECT_NEAR(L2LogNormalization(n, eps), std::log(want), 1e-11) << n;
    }
  }
  EXPECT_FALSE(L2Normalization(65, 1.0).ok());
  EXPECT_TRUE(std::isfinite(L2LogNormalization(5000, 1.0)));
}

TEST(L2Normalization, PolarIntegralIsOne) {
  for (int n = 1; n <= 6; ++n) {
    const double c = *L2Normalization(n, 1.5);
    EXPECT_NEAR(oracle::RadialMass(n, 1.5, c), 1.0, 1e-9) << n;
  }
}

TEST(Normalization, QuadratureOverBoxForEveryModel) {
  std::vector<MechanismSpec> specs;
  for (double eps : {0.5, 1.0, 2.0}) {
    specs.push_back(Make(MechanismKind::kLaplace1D, eps));
    specs.push_back(Make(MechanismKind::kProductL1, eps, 2));
    specs.push_back(Make(MechanismKind::kProductL1, eps, 3));
    for (int n = 1; n <= 4; ++n) specs.push_back(Make(MechanismKind::kRadialL2, eps, n));
    specs.push_back(Make(MechanismKind::kComposite, eps, 2, 2));
  }
  for (const MechanismSpec& spec : specs) {
    const DensityModel model = MechanismDensity(spec);
    const double eps = spec.epsilon();
    // Fewer nodes per panel in 4D keep the tensor grid small; the rule error
    // stays near 1e-5.
    const int nodes = model.dimension == 4 ? 4 : 6;
    absl::StatusOr<double> mass = DensityMass(model, 40.0 / eps, 1.0 / eps, nodes);
    ASSERT_TRUE(mass.ok()) << mass.status();
    EXPECT_NEAR(*mass, 1.0, 1e-3) << model.name << " d=" << model.dimension;
  }
  EXPECT_NEAR(*DensityMass(GaussianDensity(2, 1.0), 40.0, 1.0), 1.0, 1e-3);
}

TEST(Normalization, DensityModelCarriesTheConstant) {
  const DensityModel model = MechanismDensity(Make(MechanismKind::kRadialL2, 2.0, 3));
  EXPECT_NEAR(model.normalization_constant, oracle::L2Constant(3, 2.0), 1e-14);
  const std::vector<double> origin(3, 0.0);
  EXPECT_NEAR(model.Density(origin), oracle::L2Constant(3, 2.0), 1e-14);
}

TEST(Sampling, DeterministicPerSeedAndStream) {
  const MechanismSpec spec = Make(MechanismKind::kComposite, 1.0, 2, 3);
  Rng a(42, 1), b(42, 1), c(42, 2), d(43, 1);
  const NoiseVector va = Sample(spec, a);
  EXPECT_EQ(va, Sample(spec, b));
  EXPECT_NE(va, Sample(spec, c));
  EXPECT_NE(va, Sample(spec, d));
  EXPECT_EQ(Rng(5, 0).Split(3).NextU64(), Rng(5, 3).NextU64());
  EXPECT_NE(DeriveStreamSeed(0, 0), DeriveStreamSeed(0, 1));
}

TEST(Sampling, AllEntriesFiniteAndSized) {
  Rng rng(1, 0);
  for (const MechanismSpec& spec :
       {Make(MechanismKind::kLaplace1D, 1.0), Make(MechanismKind::kProductL1, 3.0, 7),
        Make(MechanismKind::kRadialL2, 0.2, 5), Make(MechanismKind::kComposite, 1.0, 3, 4)}) {
    for (int t = 0; t < 2000; ++t) {
      const NoiseVector v = Sample(spec, rng);
      ASSERT_EQ(static_cast<int>(v.size()), spec.Dimension());
      for (double x : v) ASSERT_TRUE(std::isfinite(x));
    }
  }
}

TEST(Sampling, Laplace1DSecondMoment) {
  const MeanEstimate est = MonteCarloMse(Make(MechanismKind::kLaplace1D, 1.0), 1000000, 3);
  EXPECT_NEAR(est.mean, 2.0, 0.02);
  EXPECT_LE(std::fabs(est.mean - 2.0), 3.0 * est.standard_error);
}

TEST(Sampling, RadialMagnitudeMatchesGammaMoments) {
  for (int n : {2, 3}) {
    const double eps = 1.0;
    const MechanismSpec spec = Make(MechanismKind::kRadialL2, eps, n);
    Rng rng(17, n);
    RunningMoments first, second;
    for (int t = 0; t < 1000000; ++t) {
      const double r2 = SquaredNorm(Sample(spec, rng));
      first.Add(std::sqrt(r2));
      second.Add(r2);
    }
    const double mean = n / eps;
    const double m2 = n * (n + 1.0) / (eps * eps);
    EXPECT_LE(std::fabs(first.mean() - mean), 3.0 * first.Estimate().standard_error);
    EXPECT_LE(std::fabs(second.mean() - m2), 3.0 * second.Estimate().standard_error);
    if (n == 3) {
      EXPECT_NEAR(first.mean(), 3.0, 0.03);
    }
  }
}

TEST(Sampling, RadialMagnitudePassesGammaKs) {
  const MechanismSpec spec = Make(MechanismKind::kRadialL2, 2.0, 4);
  Rng rng(8, 0);
  std::vector<double> radii;
  for (int t = 0; t < 50000; ++t) radii.push_back(std::sqrt(SquaredNorm(Sample(spec, rng))));
  const double d = KsStatistic(radii, [](double r) { return GammaCdf(4, 2.0, r); });
  EXPECT_GT(oracle::KolmogorovTail(d * std::sqrt(radii.size())), 0.01);
}

TEST(Sampling, ScalingLawHoldsSampleBySample) {
  for (MechanismKind kind : {MechanismKind::kLaplace1D, MechanismKind::kProductL1,
                             MechanismKind::kRadialL2, MechanismKind::kComposite}) {
    const int n = kind == MechanismKind::kLaplace1D ? 1 : 3;
    const MechanismSpec base = Make(kind, 1.0, n, 2);
    const double k = 4.0;
    Rng a(9, 0), b(9, 0);
    for (int t = 0; t < 1000; ++t) {
      const NoiseVector v = Sample(base, a);
      const NoiseVector w = Sample(base.WithEpsilon(k), b);
      for (size_t i = 0; i < v.size(); ++i) {
        ASSERT_NEAR(v[i] / k, w[i], 1e-12 * (1.0 + std::fabs(v[i])));
      }
    }
  }
}

TEST(Sampling, ScaledSamplesMatchMseAtHigherEpsilon) {
  const MechanismSpec spec = Make(MechanismKind::kRadialL2, 1.0, 2);
  Rng rng(21, 0);
  RunningMoments m;
  for (int t = 0; t < 200000; ++t) {
    NoiseVector v = Sample(spec, rng);
    for (double& x : v) x /= 2.0;
    m.Add(SquaredNorm(v));
  }
  const double want = TheoreticalMse(spec.WithEpsilon(2.0));
  EXPECT_LE(std::fabs(m.mean() - want), 3.0 * m.Estimate().standard_error);
}

TEST(Sampling, ProductL1MarginalsAreLaplace) {
  const MechanismSpec product = Make(MechanismKind::kProductL1, 1.5, 3);
  const MechanismSpec single = Make(MechanismKind::kLaplace1D, 1.5);
  Rng rng(31, 0), ref(31, 1);
  std::vector<std::vector<double>> marginals(3);
  std::vector<double> reference;
  for (int t = 0; t < 20000; ++t) {
    const NoiseVector v = Sample(product, rng);
    for (int j = 0; j < 3; ++j) marginals[j].push_back(v[j]);
    reference.push_back(Sample(single, ref)[0]);
  }
  for (int j = 0; j < 3; ++j) {
    EXPECT_FALSE(KsTwoSampleRejects(marginals[j], reference, 0.01)) << j;
    const double d = KsStatistic(marginals[j], [](double x) {
      return oracle::LaplaceCdf(x, 1.5);
    });
    EXPECT_GT(oracle::KolmogorovTail(d * std::sqrt(20000.0)), 0.01) << j;
  }
}

TEST(Sampling, RadialDirectionIsUniform) {
  for (int n : {2, 3, 5}) {
    const MechanismSpec spec = Make(MechanismKind::kRadialL2, 1.0, n);
    Rng rng(41, n);
    const int samples = 100000;
    std::vector<double> mean(n, 0.0);
    std::vector<double> cov(n * n, 0.0);
    for (int t = 0; t < samples; ++t) {
      NoiseVector v = Sample(spec, rng);
      const double norm = std::sqrt(SquaredNorm(v));
      for (double& x : v) x /= norm;
      for (int i = 0; i < n; ++i) {
        mean[i] += v[i];
        for (int j = 0; j < n; ++j) cov[i * n + j] += v[i] * v[j];
      }
    }
    double mean_norm = 0.0;
    for (double& x : mean) {
      x /= samples;
      mean_norm += x * x;
    }
    const double root_n = std::sqrt(static_cast<double>(samples));
    EXPECT_LE(std::sqrt(mean_norm), 3.0 / root_n) << n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double want = i == j ? 1.0 / n : 0.0;
        EXPECT_LE(std::fabs(cov[i * n + j] / samples - want), 5.0 / root_n)
            << n << " " << i << "," << j;
      }
    }
  }
}

TEST(Sampling, CompositeMseIsAdditiveOverBlocks) {
  const MechanismSpec composite = Make(MechanismKind::kComposite, 1.0, 3, 2);
  const MechanismSpec block = Make(MechanismKind::kRadialL2, 1.0, 2);
  const MeanEstimate c = MonteCarloMse(composite, 300000, 5);
  const MeanEstimate b = MonteCarloMse(block, 300000, 6);
  const double se = std::hypot(c.standard_error, 3.0 * b.standard_error);
  EXPECT_LE(std::fabs(c.mean - 3.0 * b.mean), 3.5 * se);
  EXPECT_LE(std::fabs(c.mean - 18.0), 3.0 * c.standard_error);
}

TEST(Sampling, EmpiricalMseWithinThreeStandardErrors) {
  struct Case {
    MechanismKind kind;
    int n, m;
    const char* name;
  };
  for (const Case& c : {Case{MechanismKind::kLaplace1D, 1, 1, "laplace1d"},
                        Case{MechanismKind::kProductL1, 5, 1, "l1"},
                        Case{MechanismKind::kRadialL2, 3, 1, "l2"},
                        Case{MechanismKind::kComposite, 2, 3, "composite"}}) {
    for (double eps : {0.5, 2.0}) {
      const MeanEstimate est = MonteCarloMse(Make(c.kind, eps, c.n, c.m), 200000, 77);
      const double want = oracle::TheoreticalMse(c.name, c.n, c.m, eps);
      EXPECT_LE(std::fabs(est.mean - want), 3.0 * est.standard_error)
          << c.name << " eps=" << eps;
    }
  }
}

TEST(ExpMechanismDensity1D, RecoversLaplace) {
  const Grid1D grid = *Grid1D::Create(-30.0, 30.0, 0.01);
  absl::StatusOr<DiscretizedDensity> d = ExpMechanismDensity1D(
      [](double u, double y) { return -std::fabs(u - y); }, 1.0, 0.0, grid);
  ASSERT_TRUE(d.ok()) << d.status();
  for (int i = 0; i < grid.size(); i += 37) {
    const double y = grid.Point(i);
    EXPECT_NEAR(d->density[i], std::exp(oracle::LaplaceLogDensity(y, 1.0)), 1e-4);
  }
  const std::vector<double> at{1.234};
  EXPECT_NEAR(d->model.Density(at), std::exp(oracle::LaplaceLogDensity(1.234, 1.0)),
              1e-4);
}

TEST(ExpMechanismDensity1D, ConstantScoreIsUniform) {
  const Grid1D grid = *Grid1D::Create(-2.0, 3.0, 0.05);
  absl::StatusOr<DiscretizedDensity> d =
      ExpMechanismDensity1D([](double, double) { return 0.0; }, 2.0, 0.0, grid);
  ASSERT_TRUE(d.ok());
  for (double v : d->density) EXPECT_NEAR(v, 0.2, 1e-12);
}

TEST(ExpMechanismDensity1D, RejectsBadScores) {
  const Grid1D grid = *Grid1D::Create(-2.0, 2.0, 0.5);
  EXPECT_FALSE(ExpMechanismDensity1D([](double, double) { return std::nan(""); },
                                     1.0, 0.0, grid)
                   .ok());
  EXPECT_FALSE(ExpMechanismDensity1D([](double, double) { return -1e308; }, 10.0,
                                     0.0, grid)
                   .ok());
  EXPECT_FALSE(ExpMechanismDensity1D([](double, double) { return 0.0; }, 0.0,
                                     0.0, grid)
                   .ok());
}

TEST(Grid1D, Validation) {
  EXPECT_FALSE(Grid1D::Create(0.0, 1.0, 0.3).ok());
  EXPECT_FALSE(Grid1D::Create(1.0, 0.0, 0.1).ok());
  EXPECT_FALSE(Grid1D::Create(0.0, 1.0, 0.0).ok());
  const Grid1D g = *Grid1D::Create(-1.0, 1.0, 0.1);
  EXPECT_EQ(g.size(), 21);
  EXPECT_EQ(g.Point(20), 1.0);
}

TEST(Staircase, CellwiseMassIsOne) {
  const StaircaseControl s = *StaircaseControl::Create(1.0, 1.0);
  double mass = 0.0;
  for (int j = -200; j < 200; ++j) {
    mass += oracle::Simpson([&](double v) { return std::exp(s.LogDensity(v)); },
                            j + 1e-12, j + 1.0 - 1e-12, 2);
  }
  EXPECT_NEAR(mass, 1.0, 1e-6);
  EXPECT_NEAR(s.Cdf(-200.0), 0.0, 1e-12);
  EXPECT_NEAR(s.Cdf(200.0), 1.0, 1e-12);
}

TEST(Staircase, JumpsAtCellEdgesAndConvergesToLaplace) {
  const StaircaseControl s = *StaircaseControl::Create(1.0, 0.5);
  for (double edge : {0.5, 1.0, 2.5, -1.0}) {
    EXPECT_GT(std::fabs(s.LogDensity(edge) - s.LogDensity(edge - 1e-9)), 0.4);
  }
  double previous = INFINITY;
  for (double q : {0.5, 0.1, 0.01, 0.001}) {
    double worst = 0.0;
    for (double v = -5.0; v <= 5.0; v += 0.173) {
      worst = std::max(worst, std::fabs(*StaircaseLogDensity1D(v, 1.0, q) -
                                        oracle::LaplaceLogDensity(v, 1.0)));
    }
    EXPECT_LT(worst, previous);
    previous = worst;
  }
  EXPECT_LT(previous, 3e-3);
  EXPECT_FALSE(StaircaseControl::Create(1.0, 0.0).ok());
}

TEST(Staircase, SamplerMatchesCdf) {
  const StaircaseControl s = *StaircaseControl::Create(1.0, 1.0);
  Rng rng(3, 0);
  std::vector<double> x;
  for (int t = 0; t < 50000; ++t) x.push_back(s.Sample(rng));
  const double d = KsStatistic(x, [&](double v) { return s.Cdf(v); });
  EXPECT_GT(oracle::KolmogorovTail(d * std::sqrt(50000.0)), 0.01);
}

}  // namespace
}  // namespace lipdp
