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

#ifndef LIPDP_STATISTICS_H_
#define LIPDP_STATISTICS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lipdp {

// Regularized lower incomplete gamma P(a, x), by series for x < a + 1 and a
// continued fraction otherwise.
double RegularizedLowerGamma(double a, double x);

// CDF of Gamma(shape, scale = 1 / rate) at x.
double GammaCdf(double shape, double rate, double x);

// Laplace(0, 1/eps) distribution, in log space where it matters.
double LaplaceCdf(double x, double eps);
double LaplaceLogCdf(double x, double eps);
// ln P(a < V <= b); -infinity when a >= b. Endpoints may be infinite.
double LaplaceLogIntervalProbability(double a, double b, double eps);

// Inverse of the standard normal CDF.
double NormalQuantile(double p);

// Asymptotic Kolmogorov critical value c(alpha): reject when
// sqrt(N) * D > c(alpha).
double KolmogorovCriticalValue(double alpha);

// One-sample Kolmogorov-Smirnov statistic sup |F_N - F|.
double KsStatistic(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov statistic.
double KsTwoSampleStatistic(std::vector<double> a, std::vector<double> b);

// True when the two-sample KS test rejects equality at level alpha.
bool KsTwoSampleRejects(std::vector<double> a, std::vector<double> b,
                        double alpha);

struct ProbabilityInterval {
  double lo;
  double hi;
};

// Wilson score interval for a binomial proportion with normal quantile z.
ProbabilityInterval WilsonInterval(int64_t successes, int64_t trials, double z);

// Dvoretzky-Kiefer-Wolfowitz half-width: sup |F_N - F| <= result with
// probability 1 - alpha.
double DkwHalfWidth(int64_t n, double alpha);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int64_t count = 0;
};

// Welford accumulator.
class RunningMoments {
 public:
  void Add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / count_;
    m2_ += delta * (x - mean_);
  }
  int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ > 1 ? m2_ / (count_ - 1) : 0.0; }
  MeanEstimate Estimate() const;

 private:
  int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace lipdp

#endif  // LIPDP_STATISTICS_H_
