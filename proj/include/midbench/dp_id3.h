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
// Epsilon-DP ID3. Splits are chosen by the exponential mechanism with an
// information-gain quality; leaf class counts are released once with
// Laplace noise. The per-level budget is eps' = eps / (2 (max_depth + 1)):
// nodes on one level touch disjoint rows, so each level of split choices
// consumes eps' by parallel composition, and the single leaf release
// consumes another eps'. Total consumption, reported exactly in the ledger,
// is (levels_used + 1) * eps' <= eps.
//
// The tree is grown to full depth regardless of node contents; stopping is
// driven only by depth and the supply of unused features, so the structure
// never encodes an unaccounted data-dependent decision.
#ifndef MIDBENCH_DP_ID3_H_
#define MIDBENCH_DP_ID3_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "midbench/random.h"
#include "midbench/tree.h"

namespace midbench {

struct DpBudgetEntry {
  std::string release;
  double epsilon = 0.0;
};

struct DpBudgetLedger {
  std::vector<DpBudgetEntry> entries;
  double total = 0.0;
};

namespace dp_id3_internal {

// Quality of splitting on f: q = sum_{v,c} n_vc ln(n_vc / n_v), the negative
// conditional-entropy mass. Per-node constants cancel inside the exponential
// mechanism, so this ranks features exactly like information gain.
inline double SplitQuality(const Dataset& data,
                           const std::vector<std::size_t>& rows, int f,
                           int num_classes) {
  const int card = data.schema().features()[f].cardinality;
  std::vector<std::vector<double>> counts(card,
                                          std::vector<double>(num_classes, 0.0));
  std::vector<double> totals(card, 0.0);
  for (std::size_t r : rows) {
    const auto code = static_cast<int>(data.value(r, f));
    counts[code][data.class_label(r)] += 1.0;
    totals[code] += 1.0;
  }
  double q = 0.0;
  for (int v = 0; v < card; ++v) {
    for (int c = 0; c < num_classes; ++c) {
      if (counts[v][c] > 0.0)
        q += counts[v][c] * std::log(counts[v][c] / totals[v]);
    }
  }
  return q;
}

// Replace-one sensitivity bound for SplitQuality. Moving one record between
// cells changes each of the two affected (n ln n) pairs by at most
// ln(N) + 1, with the child-total terms partially cancelling; ln(N) + 2 is
// a safe bound for N >= 1.
inline double QualitySensitivity(std::size_t training_size) {
  return std::log(static_cast<double>(std::max<std::size_t>(training_size, 2))) +
         2.0;
}

struct DpBuilder {
  const Dataset& data;
  int num_classes;
  int max_depth;
  double eps_per_level;
  double sensitivity;
  Rng& rng;
  int deepest_split_level = -1;

  std::unique_ptr<TreeNode> Build(const std::vector<std::size_t>& rows,
                                  int depth, std::vector<bool>& used) {
    std::vector<int> eligible;
    for (int f = 0; f < static_cast<int>(used.size()); ++f)
      if (!used[f]) eligible.push_back(f);

    if (depth >= max_depth || eligible.empty()) {
      auto node = std::make_unique<TreeNode>();
      node->feature_index = -1;
      node->depth = depth;
      node->class_counts.assign(num_classes, 0.0);
      for (std::size_t r : rows) node->class_counts[data.class_label(r)] += 1.0;
      for (double& c : node->class_counts) {
        c = std::max(0.0, c + rng.Laplace(1.0 / eps_per_level));
      }
      node->predicted_class = tree_internal::Argmax(node->class_counts);
      return node;
    }

    // Exponential mechanism over eligible features.
    std::vector<double> quality(eligible.size());
    double max_q = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      quality[i] = SplitQuality(data, rows, eligible[i], num_classes);
      max_q = std::max(max_q, quality[i]);
    }
    std::vector<double> weights(eligible.size());
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      weights[i] =
          std::exp(eps_per_level * (quality[i] - max_q) / (2.0 * sensitivity));
    }
    const int chosen = eligible[rng.Categorical(weights)];
    deepest_split_level = std::max(deepest_split_level, depth);

    auto node = std::make_unique<TreeNode>();
    node->feature_index = chosen;
    node->depth = depth;
    node->class_counts.assign(num_classes, 0.0);
    node->predicted_class = 0;

    const int card = data.schema().features()[chosen].cardinality;
    std::vector<std::vector<std::size_t>> child_rows(card);
    for (std::size_t r : rows)
      child_rows[static_cast<int>(data.value(r, chosen))].push_back(r);
    used[chosen] = true;
    node->children.resize(card);
    for (int v = 0; v < card; ++v)
      node->children[v] = Build(child_rows[v], depth + 1, used);
    used[chosen] = false;
    return node;
  }
};

}  // namespace dp_id3_internal

// Exponential-mechanism probabilities the root split follows, exposed for
// distribution tests against the implementation's own declaration.
inline std::vector<double> DpId3RootSplitProbabilities(const Dataset& train,
                                                       double epsilon,
                                                       const TreeConfig& config) {
  const int num_classes = train.schema().label().num_classes;
  const double eps_per_level = epsilon / (2.0 * (config.max_depth + 1));
  const double sensitivity =
      dp_id3_internal::QualitySensitivity(train.size());
  std::vector<std::size_t> rows(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) rows[r] = r;
  std::vector<double> weights(train.schema().num_features());
  double max_q = -std::numeric_limits<double>::infinity();
  std::vector<double> quality(weights.size());
  for (std::size_t f = 0; f < weights.size(); ++f) {
    quality[f] = dp_id3_internal::SplitQuality(train, rows, static_cast<int>(f),
                                               num_classes);
    max_q = std::max(max_q, quality[f]);
  }
  double total = 0.0;
  for (std::size_t f = 0; f < weights.size(); ++f) {
    weights[f] = std::exp(eps_per_level * (quality[f] - max_q) /
                          (2.0 * sensitivity));
    total += weights[f];
  }
  for (double& w : weights) w /= total;
  return weights;
}

// Epsilon-DP decision tree. Reproducible for a fixed Seed. The ledger, when
// requested, itemizes the exact consumption per release level.
inline DecisionTree TrainDpId3(const Dataset& train, double epsilon,
                               const TreeConfig& config, Seed seed,
                               DpBudgetLedger* ledger = nullptr) {
  tree_internal::CheckTreeInput(train, config, "train_dp_id3");
  if (!(epsilon > 0.0)) throw ConfigError("train_dp_id3: epsilon must be > 0");

  const double eps_per_level = epsilon / (2.0 * (config.max_depth + 1));
  Rng rng(seed);
  dp_id3_internal::DpBuilder builder{
      train,
      train.schema().label().num_classes,
      config.max_depth,
      eps_per_level,
      dp_id3_internal::QualitySensitivity(train.size()),
      rng};

  std::vector<bool> used(train.schema().num_features(), false);
  std::vector<std::size_t> rows(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) rows[r] = r;

  DecisionTree tree;
  tree.num_classes = train.schema().label().num_classes;
  tree.training_size = train.size();
  tree.criterion = config.criterion;
  tree.lambda = 0.0;
  tree.root = builder.Build(rows, 0, used);

  if (ledger != nullptr) {
    ledger->entries.clear();
    ledger->total = 0.0;
    for (int level = 0; level <= builder.deepest_split_level; ++level) {
      ledger->entries.push_back(
          {"split level " + std::to_string(level), eps_per_level});
      ledger->total += eps_per_level;
    }
    ledger->entries.push_back({"leaf counts", eps_per_level});
    ledger->total += eps_per_level;
  }
  return tree;
}

}  // namespace midbench

#endif  // MIDBENCH_DP_ID3_H_
