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

#ifndef LIPDP_MECHANISMS_H_
#define LIPDP_MECHANISMS_H_

#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "lipdp/density.h"
#include "lipdp/privacy_params.h"
#include "lipdp/rng.h"

namespace lipdp {

// ln(eps/2) - eps * |v|.
absl::StatusOr<double> Laplace1DLogDensity(double v, double eps);

// Draws one noise vector. Consumption order, per call:
//   Laplace1D, ProductL1: one word per coordinate; bit 63 is the sign and
//     the top 53 bits of the same word (with bit 63 cleared first) give the
//     uniform for the exponential magnitude.
//   RadialL2, Composite: per block of size k, k words for the Gamma(k, 1/eps)
//     magnitude (sum of k exponentials), then ceil(k / 2) normal pairs for the
//     direction (a trailing odd normal is discarded).
NoiseVector Sample(const MechanismSpec& spec, Rng& rng);

// Allocation-free variant; out.size() must equal spec.Dimension().
void SampleInto(const MechanismSpec& spec, Rng& rng, std::span<double> out);

// Closed-form E||V||_2^2:
//   Laplace1D 2/eps^2, ProductL1 2n/eps^2, RadialL2 n(n+1)/eps^2,
//   Composite nm(m+1)/eps^2.
double TheoreticalMse(const MechanismSpec& spec);

// Normalizing constant of exp(-eps ||v||_2) on R^n:
//   eps^n Gamma(n/2 + 1) / (pi^(n/2) Gamma(n + 1)).
// Supported for n <= 64; OutOfRange beyond that or if the value is not a
// normal double.
absl::StatusOr<double> L2Normalization(int n, double eps);

// Logarithm of the same constant, computed through lgamma. No range limit.
double L2LogNormalization(int n, double eps);

// Density of the mechanism's noise as a function of the noise vector.
DensityModel MechanismDensity(const MechanismSpec& spec);

// Isotropic Gaussian with variance 1/eps^2 per coordinate. Used as a
// negative control: its log-density gradient is unbounded.
DensityModel GaussianDensity(int dimension, double eps);

// Density proportional to exp(eps * score(u, y)) tabulated on a grid in y.
struct DiscretizedDensity {
  Grid1D grid;
  std::vector<double> density;  // normalized so the trapezoid mass is 1
  DensityModel model;           // piecewise-linear log-density, -inf off-grid
};

using ScoreFunction = std::function<double(double u, double y)>;

// Exponential mechanism with a score that is L-Lipschitz in u; the result is
// eps*L-Lipschitz private. Fails if the score is not finite on the grid or
// the numerical mass is not a positive finite number.
absl::StatusOr<DiscretizedDensity> ExpMechanismDensity1D(
    const ScoreFunction& score, double eps, double u, const Grid1D& grid);

// Staircase-shaped negative control. On cell [j q, (j + 1) q) the density is
// the Laplace density at the cell's left edge, renormalized. Its
// log-density is discontinuous at every cell edge.
class StaircaseControl {
 public:
  static absl::StatusOr<StaircaseControl> Create(double eps,
                                                 double quantization);

  double epsilon() const { return eps_; }
  double quantization() const { return q_; }

  double LogDensity(double v) const;
  double Cdf(double v) const;
  // Three words: cell magnitude, cell sign, offset within the cell.
  double Sample(Rng& rng) const;
  DensityModel Model() const;

 private:
  StaircaseControl(double eps, double q);

  double eps_;
  double q_;
  double ratio_;         // exp(-eps q)
  double log_mass_;      // ln of the unnormalized mass
};

absl::StatusOr<double> StaircaseLogDensity1D(double v, double eps,
                                             double quantization);

}  // namespace lipdp

#endif  // LIPDP_MECHANISMS_H_
