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
#ifndef MIDBENCH_SYNTH_H_
#define MIDBENCH_SYNTH_H_

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "midbench/dataset.h"
#include "midbench/error.h"
#include "midbench/random.h"
#include "midbench/schema.h"

namespace midbench {

// Conditional model of one nonsensitive feature given the sensitive code.
// For continuous features: one (mean, sd) pair per sensitive value. For
// categorical features: one probability row per sensitive value.
struct FeatureConditional {
  std::vector<double> means;               // continuous, size = |X_s|
  std::vector<double> sds;                 // continuous, size = |X_s|
  std::vector<std::vector<double>> probs;  // categorical, |X_s| x cardinality
};

// Additive contribution of one feature to the label score. Regression uses a
// single output channel; classification uses one channel per class.
struct LabelEffect {
  std::vector<std::vector<double>> weights;  // categorical: card x channels
  std::vector<double> slope;                 // continuous: channels
};

struct LabelModel {
  std::vector<double> intercept;     // channels (1 for regression)
  std::vector<LabelEffect> effects;  // one per feature, schema order
  double noise_sd = 0.0;             // regression only
};

// Generator parameters for schema-compatible synthetic data: a prior over
// the sensitive attribute, per-value conditionals for X_ns, and a label
// model over all features, so the sensitive attribute is correlated with
// (X_ns, Y) by construction.
struct SynthConfig {
  std::vector<double> prior;
  std::vector<FeatureConditional> conditionals;  // one per nonsensitive
                                                 // feature, schema order with
                                                 // the sensitive one skipped
  LabelModel label;
  std::size_t n_samples = 0;
};

namespace internal {

inline void CheckProbabilityVector(const std::vector<double>& p,
                                   const std::string& what) {
  if (p.empty()) throw ConfigError("synth: empty probability vector, " + what);
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ConfigError("synth: negative probability, " + what);
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("synth: probabilities sum to " + std::to_string(total) +
                      " rather than 1, " + what);
}

}  // namespace internal

inline void ValidateSynthConfig(const SynthConfig& config,
                                const FeatureSchema& schema) {
  const int k = schema.sensitive_feature().cardinality;
  if (static_cast<int>(config.prior.size()) != k)
    throw ConfigError("synth: prior size does not match sensitive cardinality");
  internal::CheckProbabilityVector(config.prior, "sensitive prior");
  if (config.conditionals.size() != schema.num_features() - 1)
    throw ConfigError("synth: need one conditional per nonsensitive feature");
  std::size_t ci = 0;
  for (std::size_t f = 0; f < schema.num_features(); ++f) {
    if (f == schema.sensitive_index()) continue;
    const Feature& feat = schema.features()[f];
    const FeatureConditional& cond = config.conditionals[ci++];
    if (feat.kind == FeatureKind::kContinuous) {
      if (static_cast<int>(cond.means.size()) != k ||
          static_cast<int>(cond.sds.size()) != k)
        throw ConfigError("synth: conditional for " + feat.name +
                          " needs one (mean, sd) per sensitive value");
      for (double sd : cond.sds)
        if (!(sd > 0.0))
          throw ConfigError("synth: nonpositive sd for " + feat.name);
    } else {
      if (static_cast<int>(cond.probs.size()) != k)
        throw ConfigError("synth: conditional for " + feat.name +
                          " needs one probability row per sensitive value");
      for (const auto& row : cond.probs) {
        if (static_cast<int>(row.size()) != feat.cardinality)
          throw ConfigError("synth: conditional row width mismatch for " +
                            feat.name);
        internal::CheckProbabilityVector(row, "conditional of " + feat.name);
      }
    }
  }
  const std::size_t channels =
      schema.is_regression() ? 1
                             : static_cast<std::size_t>(schema.label().num_classes);
  if (config.label.intercept.size() != channels)
    throw ConfigError("synth: label intercept has wrong channel count");
  if (config.label.effects.size() != schema.num_features())
    throw ConfigError("synth: need one label effect per feature");
  for (std::size_t f = 0; f < schema.num_features(); ++f) {
    const Feature& feat = schema.features()[f];
    const LabelEffect& e = config.label.effects[f];
    if (feat.kind == FeatureKind::kCategorical) {
      if (static_cast<int>(e.weights.size()) != feat.cardinality)
        throw ConfigError("synth: label effect for " + feat.name +
                          " needs one weight row per code");
      for (const auto& row : e.weights)
        if (row.size() != channels)
          throw ConfigError("synth: label effect channel mismatch for " +
                            feat.name);
    } else {
      if (e.slope.size() != channels)
        throw ConfigError("synth: label slope channel mismatch for " +
                          feat.name);
    }
  }
  if (schema.is_regression() && !(config.label.noise_sd >= 0.0))
    throw ConfigError("synth: negative label noise");
  if (config.n_samples == 0) throw ConfigError("synth: n_samples must be >= 1");
}

// Draws n_samples rows: x_s ~ prior, X_ns from the per-value conditionals,
// labels from the label model. Pure function of (config, schema, seed).
inline Dataset SynthGenerate(const SynthConfig& config,
                             const FeatureSchema& schema, Seed seed) {
  ValidateSynthConfig(config, schema);
  Rng rng(seed);
  const std::size_t d = schema.num_features();
  const std::size_t channels =
      schema.is_regression() ? 1
                             : static_cast<std::size_t>(schema.label().num_classes);
  std::vector<double> values(config.n_samples * d);
  std::vector<double> labels(config.n_samples);
  for (std::size_t r = 0; r < config.n_samples; ++r) {
    double* row = values.data() + r * d;
    const int xs = static_cast<int>(rng.Categorical(config.prior));
    row[schema.sensitive_index()] = xs;
    std::size_t ci = 0;
    for (std::size_t f = 0; f < d; ++f) {
      if (f == schema.sensitive_index()) continue;
      const Feature& feat = schema.features()[f];
      const FeatureConditional& cond = config.conditionals[ci++];
      if (feat.kind == FeatureKind::kContinuous) {
        row[f] = rng.Normal(cond.means[xs], cond.sds[xs]);
      } else {
        row[f] = static_cast<double>(rng.Categorical(cond.probs[xs]));
      }
    }
    std::vector<double> score = config.label.intercept;
    for (std::size_t f = 0; f < d; ++f) {
      const Feature& feat = schema.features()[f];
      const LabelEffect& e = config.label.effects[f];
      for (std::size_t c = 0; c < channels; ++c) {
        if (feat.kind == FeatureKind::kCategorical) {
          score[c] += e.weights[static_cast<int>(row[f])][c];
        } else {
          score[c] += e.slope[c] * row[f];
        }
      }
    }
    if (schema.is_regression()) {
      labels[r] = score[0] + rng.Normal(0.0, config.label.noise_sd);
    } else {
      // Softmax sampling keeps the label stochastic but correlated.
      double mx = score[0];
      for (double s : score) mx = std::max(mx, s);
      std::vector<double> probs(channels);
      double total = 0.0;
      for (std::size_t c = 0; c < channels; ++c) {
        probs[c] = std::exp(score[c] - mx);
        total += probs[c];
      }
      for (double& p : probs) p /= total;
      labels[r] = static_cast<double>(rng.Categorical(probs));
    }
  }
  return Dataset(schema, std::move(values), std::move(labels));
}

// ---------------------------------------------------------------------------
// Benchmark presets. These are stand-ins for the access-restricted clinical
// and survey benchmarks: same shape (imbalanced categorical sensitive
// attribute, correlated covariates and label), desk-scale sizes.
// ---------------------------------------------------------------------------

struct SynthPreset {
  FeatureSchema schema;
  SynthConfig config;
};

// Warfarin-style regression: 3-valued imbalanced genotype as the sensitive
// attribute, two standardized continuous covariates and one binary
// covariate, dose driven strongly by the genotype.
inline SynthPreset IwpcLikePreset(std::size_t n_samples = 2000) {
  FeatureSchema schema(
      {Feature::Categorical("vkorc1", 3), Feature::Continuous("age", -6, 6),
       Feature::Continuous("weight", -6, 6),
       Feature::Categorical("amiodarone", 2)},
      /*sensitive_index=*/0, LabelSpec::Regression());
  SynthConfig config;
  config.prior = {0.60, 0.28, 0.12};
  config.conditionals = {
      FeatureConditional{{0.0, 0.25, 0.5}, {1.0, 1.0, 1.0}, {}},
      FeatureConditional{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {}},
      FeatureConditional{{}, {}, {{0.85, 0.15}, {0.7, 0.3}, {0.6, 0.4}}},
  };
  config.label.intercept = {5.0};
  config.label.effects = {
      LabelEffect{{{0.0}, {-1.3}, {-2.4}}, {}},
      LabelEffect{{}, {0.45}},
      LabelEffect{{}, {0.30}},
      LabelEffect{{{0.0}, {-0.6}}, {}},
  };
  config.label.noise_sd = 0.8;
  config.n_samples = n_samples;
  return SynthPreset{std::move(schema), std::move(config)};
}

// Survey-style classification with categorical-only features, suitable for
// the tree models: imbalanced binary sensitive answer, three categorical
// covariates, binary label.
inline SynthPreset FteLikePreset(std::size_t n_samples = 600) {
  FeatureSchema schema(
      {Feature::Categorical("infidelity", 2), Feature::Categorical("steak", 3),
       Feature::Categorical("risk", 2), Feature::Categorical("age_group", 4)},
      /*sensitive_index=*/0, LabelSpec::Classification(2));
  SynthConfig config;
  config.prior = {0.72, 0.28};
  config.conditionals = {
      FeatureConditional{{}, {}, {{0.55, 0.3, 0.15}, {0.2, 0.35, 0.45}}},
      FeatureConditional{{}, {}, {{0.75, 0.25}, {0.35, 0.65}}},
      FeatureConditional{
          {}, {}, {{0.3, 0.3, 0.25, 0.15}, {0.15, 0.25, 0.3, 0.3}}},
  };
  config.label.intercept = {0.0, -0.4};
  config.label.effects = {
      LabelEffect{{{0.0, 0.0}, {0.0, 1.8}}, {}},
      LabelEffect{{{0.0, 0.0}, {0.0, 0.5}, {0.0, 0.9}}, {}},
      LabelEffect{{{0.0, 0.0}, {0.0, 0.8}}, {}},
      LabelEffect{{{0.0, 0.0}, {0.0, 0.3}, {0.0, 0.5}, {0.0, 0.6}}, {}},
  };
  config.n_samples = n_samples;
  return SynthPreset{std::move(schema), std::move(config)};
}

// Two well-separated Gaussian blobs keyed by a binary sensitive code; the
// label follows the blob almost deterministically. Used by the neural
// network tests.
inline SynthPreset BlobsPreset(std::size_t n_samples = 800,
                               double separation = 1.5, double spread = 0.35) {
  FeatureSchema schema(
      {Feature::Categorical("blob", 2), Feature::Continuous("f0", -10, 10),
       Feature::Continuous("f1", -10, 10)},
      /*sensitive_index=*/0, LabelSpec::Classification(2));
  SynthConfig config;
  config.prior = {0.5, 0.5};
  config.conditionals = {
      FeatureConditional{{-separation, separation}, {spread, spread}, {}},
      FeatureConditional{{-separation, separation}, {spread, spread}, {}},
  };
  config.label.intercept = {0.0, 0.0};
  config.label.effects = {
      LabelEffect{{{6.0, -6.0}, {-6.0, 6.0}}, {}},
      LabelEffect{{}, {0.0, 0.0}},
      LabelEffect{{}, {0.0, 0.0}},
  };
  config.n_samples = n_samples;
  return SynthPreset{std::move(schema), std::move(config)};
}

}  // namespace midbench

#endif  // MIDBENCH_SYNTH_H_
