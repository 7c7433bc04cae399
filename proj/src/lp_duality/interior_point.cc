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

#include <Eigen/SparseCholesky>

#include "absl/strings/str_cat.h"
#include "lipdp/lp.h"

namespace lipdp {
namespace {

using Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Iterates beyond this size are read as a certificate of divergence.
constexpr double kDivergence = 1e12;

double InfNorm(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Largest alpha in (0, 1] with v + alpha dv >= 0.
double MaxStep(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

class NormalEquations {
 public:
  NormalEquations(const SparseMatrix& a, const SparseMatrix& at)
      : a_(a), at_(at) {}

  absl::Status Factor(const VectorXd& d) {
    SparseMatrix m = a_ * d.asDiagonal() * at_;
    // Tiny diagonal shift keeps the factorization defined when d spans many
    // orders of magnitude near convergence.
    double shift = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      shift = std::max(shift, m.coeff(i, i));
    }
    shift *= 1e-15;
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.coeffRef(i, i) += shift;
    if (!analyzed_) {
      ldlt_.analyzePattern(m);
      analyzed_ = true;
    }
    ldlt_.factorize(m);
    if (ldlt_.info() != Eigen::Success) {
      return absl::InternalError("normal-equation factorization failed");
    }
    d_ = d;
    return absl::OkStatus();
  }

  // Iterative refinement against the unshifted operator A D A'.
  VectorXd Solve(const VectorXd& rhs) const {
    VectorXd x = ldlt_.solve(rhs);
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
      const VectorXd r = rhs - a_ * d_.cwiseProduct(at_ * x);
      const double norm = r.cwiseAbs().maxCoeff();
      if (!(norm < 0.5 * previous)) break;
      previous = norm;
      x += ldlt_.solve(r);
    }
    return x;
  }

 private:
  const SparseMatrix& a_;
  const SparseMatrix& at_;
  VectorXd d_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool analyzed_ = false;
};

}  // namespace

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
    case LpStatus::kIterLimit:
      return "IterLimit";
  }
  return "IterLimit";
}

absl::StatusOr<IpmResult> SolveInteriorPoint(const StandardFormLp& lp,
                                             const IpmOptions& options) {
  const SparseMatrix& a = lp.a;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  if (lp.b.size() != rows || lp.c.size() != cols || rows == 0 || cols == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "inconsistent LP dimensions: A is ", rows, "x", cols, ", b has ",
        lp.b.size(), ", c has ", lp.c.size()));
  }
  const SparseMatrix at = a.transpose();
  NormalEquations normal(a, at);
  const double b_norm = InfNorm(lp.b), c_norm = InfNorm(lp.c);

  // Mehrotra's starting point: least-norm x and least-squares y, shifted
  // into the interior.
  VectorXd x, y, z;
  {
    if (absl::Status s = normal.Factor(VectorXd::Ones(cols)); !s.ok()) return s;
    x = at * normal.Solve(lp.b);
    y = normal.Solve(a * lp.c);
    z = lp.c - at * y;
    x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
    z.array() += std::max(-1.5 * z.minCoeff(), 0.0);
    const double xz = x.dot(z);
    const double x_sum = x.sum(), z_sum = z.sum();
    x.array() += z_sum > 0 ? 0.5 * xz / z_sum : 1.0;
    z.array() += x_sum > 0 ? 0.5 * xz / x_sum : 1.0;
    if (x.minCoeff() <= 0) x.array() += 1.0;
    if (z.minCoeff() <= 0) z.array() += 1.0;
  }

  IpmResult result;
  // Best iterate by the largest of the three relative measures; returned
  // when progress stalls at the limit of double precision.
  IpmResult best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  const double n = static_cast<double>(cols);
  for (int iter = 0;; ++iter) {
    const VectorXd rp = lp.b - a * x;
    const VectorXd rd = lp.c - at * y - z;
    const double pobj = lp.c.dot(x), dobj = lp.b.dot(y);
    result.iterations = iter;
    result.primal_residual = InfNorm(rp) / (1.0 + b_norm);
    result.dual_residual = InfNorm(rd) / (1.0 + c_norm);
    result.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    result.primal_objective = pobj;
    result.dual_objective = dobj;
    result.x = x;
    result.y = y;
    result.z = z;
    const double merit = std::max(
        {result.primal_residual, result.dual_residual, result.relative_gap});
    if (merit <= options.tolerance) {
      result.status = LpStatus::kOptimal;
      return result;
    }
    if (merit < best_merit) {
      best_merit = merit;
      best = result;
      since_best = 0;
    } else if (++since_best >= 5) {
      best.status = LpStatus::kIterLimit;
      return best;
    }
    if (InfNorm(y) > kDivergence * (1.0 + c_norm) ||
        InfNorm(z) > kDivergence * (1.0 + c_norm)) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    if (InfNorm(x) > kDivergence * (1.0 + b_norm)) {
      result.status = LpStatus::kUnbounded;
      return result;
    }
    if (iter >= options.max_iterations) {
      best.status = LpStatus::kIterLimit;
      return best;
    }

    const double mu = x.dot(z) / n;
    const VectorXd d = x.cwiseQuotient(z);
    if (absl::Status s = normal.Factor(d); !s.ok()) return s;
    const auto newton = [&](const VectorXd& rc, VectorXd& dx, VectorXd& dy,
                            VectorXd& dz) {
      dy = normal.Solve(rp + a * (d.cwiseProduct(rd) - rc.cwiseQuotient(z)));
      dz = rd - at * dy;
      dx = (rc - x.cwiseProduct(dz)).cwiseQuotient(z);
    };

    VectorXd dx_aff, dy_aff, dz_aff;
    newton(-x.cwiseProduct(z), dx_aff, dy_aff, dz_aff);
    const double ap_aff = MaxStep(x, dx_aff), ad_aff = MaxStep(z, dz_aff);
    const double mu_aff =
        (x + ap_aff * dx_aff).dot(z + ad_aff * dz_aff) / n;
    const double sigma = std::pow(mu_aff / mu, 3);

    VectorXd dx, dy, dz;
    const VectorXd rc = (sigma * mu - x.cwiseProduct(z).array() -
                         dx_aff.cwiseProduct(dz_aff).array())
                            .matrix();
    newton(rc, dx, dy, dz);
    const double ap = std::min(1.0, 0.995 * MaxStep(x, dx) / 1.0);
    const double ad = std::min(1.0, 0.995 * MaxStep(z, dz) / 1.0);
    x += ap * dx;
    y += ad * dy;
    z += ad * dz;
  }
}

}  // namespace lipdp
