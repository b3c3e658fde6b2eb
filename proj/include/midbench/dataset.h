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
#ifndef MIDBENCH_DATASET_H_
#define MIDBENCH_DATASET_H_

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "midbench/error.h"
#include "midbench/random.h"
#include "midbench/schema.h"

namespace midbench {

// Immutable tabular dataset. Categorical cells hold integer codes stored as
// doubles; labels are reals for regression and class codes for
// classification. Safe to share across threads after construction.
class Dataset {
 public:
  Dataset(FeatureSchema schema, std::vector<double> values,
          std::vector<double> labels)
      : schema_(std::move(schema)),
        values_(std::move(values)),
        labels_(std::move(labels)) {
    const std::size_t d = schema_.num_features();
    if (labels_.empty()) throw DataError("dataset: no rows");
    if (values_.size() != labels_.size() * d)
      throw DataError("dataset: row/label count mismatch");
    for (std::size_t r = 0; r < labels_.size(); ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        const std::string bad = schema_.CheckValue(c, values_[r * d + c]);
        if (!bad.empty())
          throw DataError("dataset: row " + std::to_string(r) + ", column '" +
                          schema_.features()[c].name + "': " + bad);
      }
      CheckLabel(r);
    }
  }

  const FeatureSchema& schema() const { return schema_; }
  std::size_t size() const { return labels_.size(); }

  std::span<const double> row(std::size_t r) const {
    const std::size_t d = schema_.num_features();
    return {values_.data() + r * d, d};
  }
  double value(std::size_t r, std::size_t c) const {
    return values_[r * schema_.num_features() + c];
  }
  double label(std::size_t r) const { return labels_[r]; }
  int class_label(std::size_t r) const {
    return static_cast<int>(labels_[r]);
  }
  int sensitive_code(std::size_t r) const {
    return static_cast<int>(value(r, schema_.sensitive_index()));
  }
  const std::vector<double>& labels() const { return labels_; }

  // Subset by row indices (order preserved as given).
  Dataset Select(const std::vector<std::size_t>& indices) const {
    const std::size_t d = schema_.num_features();
    std::vector<double> values;
    std::vector<double> labels;
    values.reserve(indices.size() * d);
    labels.reserve(indices.size());
    for (std::size_t r : indices) {
      const auto row_span = row(r);
      values.insert(values.end(), row_span.begin(), row_span.end());
      labels.push_back(labels_[r]);
    }
    return Dataset(schema_, std::move(values), std::move(labels));
  }

  // Empirical marginal of the sensitive attribute.
  std::vector<double> SensitivePrior() const {
    const int k = schema_.sensitive_feature().cardinality;
    std::vector<double> prior(k, 0.0);
    for (std::size_t r = 0; r < size(); ++r) prior[sensitive_code(r)] += 1.0;
    for (double& p : prior) p /= static_cast<double>(size());
    return prior;
  }

 private:
  void CheckLabel(std::size_t r) const {
    const double y = labels_[r];
    if (!std::isfinite(y))
      throw DataError("dataset: non-finite label at row " + std::to_string(r));
    if (schema_.is_classification()) {
      if (y != std::floor(y) || y < 0 ||
          y >= schema_.label().num_classes)
        throw DataError("dataset: label out of class range at row " +
                        std::to_string(r));
    }
  }

  FeatureSchema schema_;
  std::vector<double> values_;
  std::vector<double> labels_;
};

// One-hot expansion with dropped reference level (category 0), continuous
// features passed through. The intercept is not part of the expansion; model
// families add it themselves.
inline void ExpandRowInto(const FeatureSchema& schema,
                          std::span<const double> row,
                          Eigen::Ref<Eigen::VectorXd> out) {
  std::size_t j = 0;
  for (std::size_t c = 0; c < schema.num_features(); ++c) {
    const Feature& f = schema.features()[c];
    if (f.kind == FeatureKind::kCategorical) {
      for (int code = 1; code < f.cardinality; ++code) {
        out[j++] = row[c] == static_cast<double>(code) ? 1.0 : 0.0;
      }
    } else {
      out[j++] = row[c];
    }
  }
}

inline Eigen::VectorXd ExpandRow(const FeatureSchema& schema,
                                 std::span<const double> row) {
  Eigen::VectorXd out(schema.expanded_dim());
  ExpandRowInto(schema, row, out);
  return out;
}

// N x expanded_dim design matrix (no intercept column).
inline Eigen::MatrixXd ExpandDataset(const Dataset& data) {
  Eigen::MatrixXd design(data.size(), data.schema().expanded_dim());
  for (std::size_t r = 0; r < data.size(); ++r) {
    Eigen::VectorXd row(design.cols());
    ExpandRowInto(data.schema(), data.row(r), row);
    design.row(r) = row;
  }
  return design;
}

// Shannon entropy, in nats, of the empirical distribution of a list of
// discrete codes. Bounded by ln(#distinct codes); zero iff all values agree.
inline double EmpiricalEntropy(std::span<const int> values) {
  if (values.empty()) throw DataError("EmpiricalEntropy: empty input");
  std::map<int, std::size_t> counts;
  for (int v : values) ++counts[v];
  const double n = static_cast<double>(values.size());
  double h = 0.0;
  for (const auto& [code, count] : counts) {
    const double q = static_cast<double>(count) / n;
    h -= q * std::log(q);
  }
  return h < 0.0 ? 0.0 : h;
}

inline double EmpiricalEntropy(const std::vector<int>& values) {
  return EmpiricalEntropy(std::span<const int>(values));
}

// Seeded shuffle split into (train, test) with |test| = round(fraction * N).
inline std::pair<Dataset, Dataset> TrainTestSplit(const Dataset& data,
                                                  double test_fraction,
                                                  Seed seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("TrainTestSplit: fraction must lie in (0, 1)");
  if (data.size() < 2) throw DataError("TrainTestSplit: need at least 2 rows");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(order);
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(data.size())));
  if (n_test == 0 || n_test == data.size())
    throw ConfigError(
        "TrainTestSplit: fraction leaves one side empty at this N");
  std::vector<std::size_t> test_idx(order.begin(), order.begin() + n_test);
  std::vector<std::size_t> train_idx(order.begin() + n_test, order.end());
  return {data.Select(train_idx), data.Select(test_idx)};
}

}  // namespace midbench

#endif  // MIDBENCH_DATASET_H_
