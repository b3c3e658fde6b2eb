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
#ifndef MIDBENCH_SCHEMA_H_
#define MIDBENCH_SCHEMA_H_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "midbench/error.h"

namespace midbench {

enum class FeatureKind { kCategorical, kContinuous };

// One column of the tabular data model. Categorical features take integer
// codes in [0, cardinality); continuous features take finite reals in
// [lo, hi].
struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::kCategorical;
  int cardinality = 0;  // categorical only
  double lo = 0.0;      // continuous only
  double hi = 0.0;

  static Feature Categorical(std::string name, int cardinality) {
    Feature f;
    f.name = std::move(name);
    f.kind = FeatureKind::kCategorical;
    f.cardinality = cardinality;
    return f;
  }
  static Feature Continuous(std::string name, double lo, double hi) {
    Feature f;
    f.name = std::move(name);
    f.kind = FeatureKind::kContinuous;
    f.lo = lo;
    f.hi = hi;
    return f;
  }
};

enum class LabelKind { kRegression, kClassification };

struct LabelSpec {
  LabelKind kind = LabelKind::kRegression;
  int num_classes = 0;  // classification only

  static LabelSpec Regression() { return LabelSpec{LabelKind::kRegression, 0}; }
  static LabelSpec Classification(int num_classes) {
    return LabelSpec{LabelKind::kClassification, num_classes};
  }
};

// Feature layout shared by every dataset, model and attack. Exactly one
// feature is the sensitive attribute X_s; all remaining features form X_ns.
class FeatureSchema {
 public:
  FeatureSchema(std::vector<Feature> features, std::size_t sensitive_index,
                LabelSpec label)
      : features_(std::move(features)),
        sensitive_index_(sensitive_index),
        label_(label) {
    Validate();
  }

  const std::vector<Feature>& features() const { return features_; }
  std::size_t num_features() const { return features_.size(); }
  std::size_t sensitive_index() const { return sensitive_index_; }
  const Feature& sensitive_feature() const {
    return features_[sensitive_index_];
  }
  const LabelSpec& label() const { return label_; }

  bool is_regression() const { return label_.kind == LabelKind::kRegression; }
  bool is_classification() const {
    return label_.kind == LabelKind::kClassification;
  }

  // Number of columns after one-hot expansion with the first category of
  // each categorical feature dropped as the reference level. This is the
  // encoding used by the linear and neural model families.
  std::size_t expanded_dim() const {
    std::size_t d = 0;
    for (const Feature& f : features_) {
      d += f.kind == FeatureKind::kCategorical
               ? static_cast<std::size_t>(f.cardinality - 1)
               : 1;
    }
    return d;
  }

  bool all_features_categorical() const {
    for (const Feature& f : features_) {
      if (f.kind != FeatureKind::kCategorical) return false;
    }
    return true;
  }

  // Checks a single row value against column i; returns an explanation or
  // the empty string when valid.
  std::string CheckValue(std::size_t i, double v) const {
    const Feature& f = features_[i];
    if (!std::isfinite(v)) return "non-finite value";
    if (f.kind == FeatureKind::kCategorical) {
      if (v != static_cast<double>(static_cast<long long>(v)))
        return "categorical value is not an integer code";
      const long long code = static_cast<long long>(v);
      if (code < 0 || code >= f.cardinality)
        return "categorical code " + std::to_string(code) +
               " out of range [0, " + std::to_string(f.cardinality) + ")";
    }
    return "";
  }

 private:
  void Validate() const {
    if (features_.empty()) throw ConfigError("schema: no features");
    if (sensitive_index_ >= features_.size())
      throw ConfigError("schema: sensitive index out of range");
    if (features_[sensitive_index_].kind != FeatureKind::kCategorical)
      throw ConfigError(
          "schema: sensitive attribute must be categorical (candidate "
          "enumeration requires a finite code set)");
    for (const Feature& f : features_) {
      if (f.name.empty()) throw ConfigError("schema: empty feature name");
      if (f.kind == FeatureKind::kCategorical && f.cardinality < 2)
        throw ConfigError("schema: categorical cardinality must be >= 2 for " +
                          f.name);
      if (f.kind == FeatureKind::kContinuous && !(f.lo < f.hi))
        throw ConfigError("schema: continuous bounds must satisfy lo < hi for " +
                          f.name);
    }
    if (label_.kind == LabelKind::kClassification && label_.num_classes < 2)
      throw ConfigError("schema: classification needs >= 2 classes");
  }

  std::vector<Feature> features_;
  std::size_t sensitive_index_;
  LabelSpec label_;
};

}  // namespace midbench

#endif  // MIDBENCH_SCHEMA_H_
