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
// Linear regression with a mutual-information output regularizer.
//
// The defended objective is mean squared error plus lambda times an
// approximation of I(X; Yhat). Because the model is deterministic the
// mutual information reduces to the output entropy H(Yhat), which is
// approximated by modeling the output distribution as a Gaussian mixture
// centered at the training outputs (component scale sigma) and applying the
// Taylor-expansion entropy approximation for Gaussian mixtures:
//
//   I_lin = -(1/N) sum_i log( (1/N) sum_j N(yhat_i - yhat_j; 0, sigma^2) )
//
// I_lin is minimized, with value (1/2) log(2 pi sigma^2), exactly when all
// training outputs coincide.
#ifndef MIDBENCH_LINREG_H_
#define MIDBENCH_LINREG_H_

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "midbench/dataset.h"
#include "midbench/error.h"
#include "midbench/schema.h"

namespace midbench {

// Weights over one-hot-expanded features (reference level dropped) plus an
// intercept, with the RMS training residual kept for attack likelihoods.
struct LinearModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double residual_sigma = 0.0;

  double Predict(const FeatureSchema& schema,
                 std::span<const double> row) const {
    return weights.dot(ExpandRow(schema, row)) + intercept;
  }

  std::vector<double> PredictAll(const Dataset& data) const {
    const Eigen::MatrixXd design = ExpandDataset(data);
    Eigen::VectorXd out = design * weights;
    out.array() += intercept;
    return {out.data(), out.data() + out.size()};
  }
};

inline nlohmann::json LinearModelToJson(const LinearModel& model) {
  return nlohmann::json{
      {"weights",
       std::vector<double>(model.weights.data(),
                           model.weights.data() + model.weights.size())},
      {"intercept", model.intercept},
      {"residual_sigma", model.residual_sigma}};
}

inline LinearModel LinearModelFromJson(const nlohmann::json& j) {
  LinearModel model;
  const auto w = j.at("weights").get<std::vector<double>>();
  model.weights =
      Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  model.intercept = j.at("intercept").get<double>();
  model.residual_sigma = j.at("residual_sigma").get<double>();
  return model;
}

struct MidLinConfig {
  double lambda = 0.0;
  // Gaussian-mixture component scale. Unset means the Silverman-style
  // default: sd of the ridge-initialized outputs times N^(-1/5).
  std::optional<double> bandwidth;
  double ridge = 0.0;
  double learning_rate = 0.02;
  int max_iters = 200;
  double grad_tolerance = 1e-6;
};

namespace internal {

inline void CheckRegression(const Dataset& data, const char* op) {
  if (!data.schema().is_regression())
    throw ConfigError(std::string(op) + ": needs a regression schema");
}

// Solves (X~' X~ + ridge * P) w = X~' y for the design with an appended
// intercept column; P is the identity with a zero in the intercept slot, so
// ridge never shrinks the intercept and the infinite-ridge limit is the mean
// predictor.
inline LinearModel SolveRidge(const Eigen::MatrixXd& design,
                              const Eigen::VectorXd& y, double ridge) {
  const Eigen::Index n = design.rows();
  const Eigen::Index d = design.cols();
  Eigen::MatrixXd full(n, d + 1);
  full.leftCols(d) = design;
  full.col(d).setOnes();
  Eigen::MatrixXd normal = full.transpose() * full;
  for (Eigen::Index j = 0; j < d; ++j) normal(j, j) += ridge;
  const Eigen::VectorXd rhs = full.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("train_ridge: normal matrix factorization failed");
  const Eigen::VectorXd w = ldlt.solve(rhs);
  const double residual = (normal * w - rhs).norm();
  if (!w.allFinite() || residual > 1e-6 * (1.0 + rhs.norm()))
    throw NumericError(
        "train_ridge: singular normal matrix (add ridge or drop collinear "
        "features)");
  LinearModel model;
  model.weights = w.head(d);
  model.intercept = w(d);
  const Eigen::VectorXd res = y - full * w;
  model.residual_sigma = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  return model;
}

// One pass over the pairwise kernel matrix: value of I_lin at outputs u and,
// when grad_u is non-null, its gradient. With
// K_ij = exp(-(u_i - u_j)^2 / (2 sigma^2)), S_i = sum_j K_ij and
// W_ij = K_ij (u_i - u_j):
//   I_lin   = log N - (1/2) log(2 pi sigma^2)... rearranged below
//   dI/du   = (1/(N sigma^2)) * ( (W 1) ./ S + W (1 ./ S) )
// using the antisymmetry of W.
inline double MiLinValueGradU(const Eigen::VectorXd& u, double bandwidth,
                              Eigen::VectorXd* grad_u) {
  const Eigen::Index n = u.size();
  const double inv_s2 = 1.0 / (bandwidth * bandwidth);
  const double log_norm = -0.5 * std::log(2.0 * M_PI * bandwidth * bandwidth);
  Eigen::MatrixXd diff(n, n);
  for (Eigen::Index j = 0; j < n; ++j) diff.col(j) = u.array() - u(j);
  const Eigen::MatrixXd kernel =
      (diff.array().square() * (-0.5 * inv_s2)).exp();
  const Eigen::VectorXd row_sum = kernel.rowwise().sum();
  // Diagonal terms are exactly 1, so every row sum is >= 1 and the log is
  // safe no matter how spread the outputs are.
  const double mi =
      -(row_sum.array().log().sum() / static_cast<double>(n)) +
      std::log(static_cast<double>(n)) - log_norm;
  if (grad_u != nullptr) {
    const Eigen::VectorXd inv_row_sum = row_sum.cwiseInverse();
    const Eigen::MatrixXd w = kernel.cwiseProduct(diff);
    *grad_u = (w.rowwise().sum().cwiseProduct(inv_row_sum) + w * inv_row_sum) *
              (inv_s2 / static_cast<double>(n));
  }
  return mi;
}

}  // namespace internal

// Ordinary/ridge least squares by normal equations; the lambda = 0 reference
// point of the tradeoff curve. The intercept is not penalized.
inline LinearModel TrainRidge(const Dataset& train, double ridge) {
  internal::CheckRegression(train, "train_ridge");
  if (ridge < 0.0) throw ConfigError("train_ridge: negative ridge");
  const Eigen::MatrixXd design = ExpandDataset(train);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
      train.labels().data(), static_cast<Eigen::Index>(train.size()));
  return internal::SolveRidge(design, y, ridge);
}

// The Gaussian-mixture entropy approximation evaluated at the model's
// outputs on `data`.
inline double MiLinEstimate(const LinearModel& model, const Dataset& data,
                            double bandwidth) {
  internal::CheckRegression(data, "mi_lin_estimate");
  if (!(bandwidth > 0.0))
    throw ConfigError("mi_lin_estimate: bandwidth must be positive");
  const std::vector<double> outputs = model.PredictAll(data);
  const Eigen::Map<const Eigen::VectorXd> u(
      outputs.data(), static_cast<Eigen::Index>(outputs.size()));
  return internal::MiLinValueGradU(u, bandwidth, nullptr);
}

// Loss and gradient of the full MID objective
//   mean((y - f(x))^2) + ridge * |w|^2 + lambda * I_lin
// at explicit parameters [weights..., intercept]. Exposed so optimizer steps
// and finite-difference checks evaluate the identical expression.
inline std::pair<double, Eigen::VectorXd> MidLinearLossGrad(
    const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
    const Eigen::VectorXd& params, double lambda, double ridge,
    double bandwidth, bool want_grad = true) {
  const Eigen::Index n = design.rows();
  const Eigen::Index d = design.cols();
  const Eigen::VectorXd w = params.head(d);
  const double intercept = params(d);
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::VectorXd u = design * w;
  u.array() += intercept;
  const Eigen::VectorXd err = u - y;
  double loss = err.squaredNorm() * inv_n + ridge * w.squaredNorm();
  Eigen::VectorXd grad_u = err * (2.0 * inv_n);
  if (lambda > 0.0) {
    Eigen::VectorXd mi_grad;
    const double mi = internal::MiLinValueGradU(
        u, bandwidth, want_grad ? &mi_grad : nullptr);
    loss += lambda * mi;
    if (want_grad) grad_u += lambda * mi_grad;
  }
  Eigen::VectorXd grad;
  if (want_grad) {
    grad.resize(d + 1);
    grad.head(d) = design.transpose() * grad_u + 2.0 * ridge * w;
    grad(d) = grad_u.sum();
  }
  return {loss, std::move(grad)};
}

struct MidLinTrace {
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  int iterations = 0;
  double bandwidth = 0.0;
};

// Gradient descent on the MID objective, initialized at the ridge solution
// and run with a fixed step until the gradient norm drops below
// grad_tolerance or max_iters is hit. The bandwidth is resolved once,
// against the ridge-initialized outputs, and held fixed so the objective
// stays stationary during the descent.
inline LinearModel TrainMidLinear(const Dataset& train,
                                  const MidLinConfig& config,
                                  MidLinTrace* trace = nullptr) {
  internal::CheckRegression(train, "train_mid_linear");
  if (config.lambda < 0.0) throw ConfigError("train_mid_linear: lambda < 0");
  if (!(config.learning_rate > 0.0))
    throw ConfigError("train_mid_linear: learning_rate must be positive");

  const Eigen::MatrixXd design = ExpandDataset(train);
  const auto n = static_cast<Eigen::Index>(train.size());
  const Eigen::Index d = design.cols();
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(train.labels().data(), n);
  const LinearModel init = internal::SolveRidge(design, y, config.ridge);

  double bandwidth;
  if (config.bandwidth.has_value()) {
    bandwidth = *config.bandwidth;
    if (!(bandwidth > 0.0))
      throw ConfigError("train_mid_linear: bandwidth must be positive");
  } else {
    Eigen::VectorXd u0 = design * init.weights;
    u0.array() += init.intercept;
    const double sd = std::sqrt((u0.array() - u0.mean()).square().sum() /
                                std::max<double>(1.0, static_cast<double>(n - 1)));
    bandwidth = sd * std::pow(static_cast<double>(n), -0.2);
    if (!(bandwidth > 0.0)) bandwidth = 1.0;  // constant-output degenerate case
  }

  Eigen::VectorXd params(d + 1);
  params.head(d) = init.weights;
  params(d) = init.intercept;

  int iter = 0;
  double grad_norm = 0.0;
  double loss = 0.0;
  for (; iter < config.max_iters; ++iter) {
    auto [value, grad] = MidLinearLossGrad(design, y, params, config.lambda,
                                           config.ridge, bandwidth);
    loss = value;
    if (!std::isfinite(loss))
      throw NumericError("train_mid_linear: loss diverged at iteration " +
                         std::to_string(iter));
    grad_norm = grad.norm();
    if (grad_norm < config.grad_tolerance) break;
    params -= config.learning_rate * grad;
    if (!params.allFinite())
      throw NumericError("train_mid_linear: weights diverged at iteration " +
                         std::to_string(iter));
  }

  LinearModel model;
  model.weights = params.head(d);
  model.intercept = params(d);
  Eigen::VectorXd u = design * model.weights;
  u.array() += model.intercept;
  model.residual_sigma =
      std::sqrt((u - y).squaredNorm() / static_cast<double>(n));
  if (trace != nullptr) {
    trace->final_loss = loss;
    trace->final_grad_norm = grad_norm;
    trace->iterations = iter;
    trace->bandwidth = bandwidth;
  }
  return model;
}

}  // namespace midbench

#endif  // MIDBENCH_LINREG_H_
