// Copyright 2026 The midbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// AdaSSP: differentially private linear regression by sufficient-statistics
// perturbation with an adaptive ridge. Three statistics are released, each
// under an (epsilon/3, delta/3) Gaussian mechanism, so the total budget is
// exactly (epsilon, delta):
//   1. the minimum eigenvalue of X'X (scalar),
//   2. X'X with a symmetric Gaussian perturbation,
//   3. X'y with a Gaussian perturbation.
// Rows are clipped inside the operation, so the stated sensitivities hold
// for arbitrary input data. The released design includes the intercept
// column; its norm bound is sqrt(feature_bound^2 + 1).
#ifndef MIDBENCH_ADASSP_H_
#define MIDBENCH_ADASSP_H_

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "midbench/dataset.h"
#include "midbench/error.h"
#include "midbench/linreg.h"
#include "midbench/random.h"

namespace midbench {

struct AdasspBounds {
  double feature_norm = 1.0;  // B_x: clip ||expanded features||_2 to this
  double label_abs = 1.0;     // B_y: clip |y| to this
};

// Calibrated noise scales, exposed so tests can compare empirical noise
// against the advertised values. `design_bound` is the norm bound of a full
// design row including the intercept.
struct AdasspNoiseScales {
  double design_bound = 0.0;
  double sigma_xtx = 0.0;     // per-entry sd of the symmetric X'X noise
  double sigma_xty = 0.0;     // per-entry sd of the X'y noise
  double sigma_eigen = 0.0;   // sd of the minimum-eigenvalue noise
  double eigen_shift = 0.0;   // conservative downward shift of the eigenvalue
  double ridge_target = 0.0;  // adaptive ridge before subtracting lambda_min
};

inline AdasspNoiseScales AdasspScales(double epsilon, double delta,
                                      const AdasspBounds& bounds,
                                      Eigen::Index design_dim) {
  if (!(epsilon > 0.0)) throw ConfigError("train_adassp: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw ConfigError("train_adassp: delta must lie in (0, 1)");
  AdasspNoiseScales s;
  const double b2 = bounds.feature_norm * bounds.feature_norm + 1.0;
  s.design_bound = std::sqrt(b2);
  const double per_release = std::sqrt(std::log(6.0 / delta)) / (epsilon / 3.0);
  s.sigma_xtx = per_release * b2;
  s.sigma_xty = per_release * s.design_bound * bounds.label_abs;
  s.sigma_eigen = per_release * b2;
  s.eigen_shift = std::log(6.0 / delta) / (epsilon / 3.0) * b2;
  const double rho = 0.05;
  const double d = static_cast<double>(design_dim);
  s.ridge_target = std::sqrt(d * std::log(6.0 / delta) *
                             std::log(2.0 * d * d / rho)) *
                   b2 / (epsilon / 3.0);
  return s;
}

// (epsilon, delta)-DP linear regression. Reproducible for a fixed Seed.
inline LinearModel TrainAdassp(const Dataset& train, double epsilon,
                               double delta, const AdasspBounds& bounds,
                               Seed seed) {
  internal::CheckRegression(train, "train_adassp");
  if (!(bounds.feature_norm > 0.0) || !(bounds.label_abs > 0.0))
    throw ConfigError("train_adassp: bounds must be positive");

  Eigen::MatrixXd features = ExpandDataset(train);
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols() + 1;  // with intercept column
  const AdasspNoiseScales s = AdasspScales(epsilon, delta, bounds, d);

  Eigen::MatrixXd design(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    Eigen::VectorXd row = features.row(r);
    const double norm = row.norm();
    if (norm > bounds.feature_norm) row *= bounds.feature_norm / norm;
    design.row(r).head(d - 1) = row;
    design(r, d - 1) = 1.0;
    const double label = train.label(r);
    y(r) = std::clamp(label, -bounds.label_abs, bounds.label_abs);
  }

  const Eigen::MatrixXd xtx = design.transpose() * design;
  const Eigen::VectorXd xty = design.transpose() * y;

  Rng rng(seed);
  // Release 1: noisy minimum eigenvalue, shifted down so it is a valid
  // lower bound with high probability, then floored at zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xtx);
  const double lambda_min = eig.eigenvalues().minCoeff();
  const double noisy_lambda_min =
      std::max(0.0, lambda_min + s.sigma_eigen * rng.Normal() - s.eigen_shift);
  const double ridge = std::max(0.0, s.ridge_target - noisy_lambda_min);

  // Release 2: symmetric perturbation of X'X.
  Eigen::MatrixXd noisy_xtx = xtx;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double z = s.sigma_xtx * rng.Normal();
      noisy_xtx(i, j) += z;
      if (i != j) noisy_xtx(j, i) += z;
    }
  }
  // Release 3: perturbation of X'y.
  Eigen::VectorXd noisy_xty = xty;
  for (Eigen::Index i = 0; i < d; ++i) noisy_xty(i) += s.sigma_xty * rng.Normal();

  Eigen::MatrixXd system = noisy_xtx;
  system.diagonal().array() += ridge;
  const Eigen::VectorXd w = system.ldlt().solve(noisy_xty);
  if (!w.allFinite())
    throw NumericError("train_adassp: perturbed system is unsolvable");

  LinearModel model;
  model.weights = w.head(d - 1);
  model.intercept = w(d - 1);
  const Eigen::VectorXd res = y - design * w;
  model.residual_sigma = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  return model;
}

}  // namespace midbench

#endif  // MIDBENCH_ADASSP_H_
