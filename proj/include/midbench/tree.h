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
// ID3 induction with an output-entropy splitting penalty.
//
// At every node the candidate feature A is scored as
//     score(A) = C(A) - lambda * H(Yhat_A)
// where C is the homogeneity criterion (information gain or Gini decrease,
// both in nats-compatible units) and H(Yhat_A) is the empirical entropy of
// the predictions the whole tree would emit on the full training set if A
// were split here, with the new children and every other frontier node
// predicting their majority class. Expansion order is depth first, children
// in category order; ties everywhere break toward the lowest index.
#ifndef MIDBENCH_TREE_H_
#define MIDBENCH_TREE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "midbench/dataset.h"
#include "midbench/error.h"
#include "midbench/schema.h"

namespace midbench {

enum class SplitCriterion { kInfoGain, kGiniImpurity };

struct TreeConfig {
  SplitCriterion criterion = SplitCriterion::kInfoGain;
  double lambda = 0.0;
  int max_depth = 4;
  int min_samples_split = 2;
};

struct TreeNode {
  // Internal node: feature_index >= 0 and one child per category code.
  // Leaf: feature_index == -1.
  int feature_index = -1;
  std::vector<std::unique_ptr<TreeNode>> children;
  // Per-class training counts. Integer for plain ID3; real after DP noise.
  std::vector<double> class_counts;
  int predicted_class = 0;
  int depth = 0;

  bool is_leaf() const { return feature_index < 0; }
};

struct DecisionTree {
  std::unique_ptr<TreeNode> root;
  int num_classes = 0;
  std::size_t training_size = 0;
  SplitCriterion criterion = SplitCriterion::kInfoGain;
  double lambda = 0.0;
};

struct TreePrediction {
  int predicted_class = 0;
  std::vector<double> confidence;
  // Set when traversal had to reroute through the most populated sibling
  // because the path for a category code was missing.
  bool fallback_used = false;
};

namespace tree_internal {

inline int Argmax(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;  // strict: ties keep the lowest index
  return best;
}

inline double CountsEntropy(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double q = c / total;
      h -= q * std::log(q);
    }
  }
  return h;
}

inline double CountsGini(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double sum_sq = 0.0;
  for (double c : counts) {
    const double q = c / total;
    sum_sq += q * q;
  }
  return 1.0 - sum_sq;
}

inline double SubtreeCount(const TreeNode& node) {
  double total = 0.0;
  if (node.is_leaf()) {
    for (double c : node.class_counts) total += c;
    return total;
  }
  for (const auto& child : node.children)
    if (child) total += SubtreeCount(*child);
  return total;
}

}  // namespace tree_internal

// Traverses to a leaf. Confidence is the leaf's class counts normalized;
// a leaf with zero total (possible after DP noise flooring) yields the
// uniform vector.
inline TreePrediction Predict(const DecisionTree& tree,
                              std::span<const double> row) {
  TreePrediction out;
  const TreeNode* node = tree.root.get();
  while (!node->is_leaf()) {
    const auto code = static_cast<std::size_t>(row[node->feature_index]);
    const TreeNode* next =
        code < node->children.size() ? node->children[code].get() : nullptr;
    if (next == nullptr) {
      // Missing path: reroute through the most populated sibling.
      out.fallback_used = true;
      double best_count = -1.0;
      for (const auto& child : node->children) {
        if (!child) continue;
        const double c = tree_internal::SubtreeCount(*child);
        if (c > best_count) {
          best_count = c;
          next = child.get();
        }
      }
      if (next == nullptr)
        throw DataError("predict: internal node with no children");
    }
    node = next;
  }
  out.predicted_class = node->predicted_class;
  double total = 0.0;
  for (double c : node->class_counts) total += c;
  out.confidence.resize(tree.num_classes);
  for (int c = 0; c < tree.num_classes; ++c) {
    out.confidence[c] = total > 0.0 ? node->class_counts[c] / total
                                    : 1.0 / static_cast<double>(tree.num_classes);
  }
  return out;
}

namespace tree_internal {

struct Builder {
  const Dataset& data;
  const TreeConfig& config;
  int num_classes;
  int sensitive_index;
  int min_depth_for_sensitive;  // Priority defense; 0 disables
  // Current whole-tree prediction per training row: each row predicts the
  // majority class of the frontier node it currently sits in.
  std::vector<int> frontier_prediction;

  Builder(const Dataset& d, const TreeConfig& c, int min_depth_sensitive)
      : data(d),
        config(c),
        num_classes(d.schema().label().num_classes),
        sensitive_index(static_cast<int>(d.schema().sensitive_index())),
        min_depth_for_sensitive(min_depth_sensitive),
        frontier_prediction(d.size(), 0) {}

  std::vector<double> ClassCounts(const std::vector<std::size_t>& rows) const {
    std::vector<double> counts(num_classes, 0.0);
    for (std::size_t r : rows) counts[data.class_label(r)] += 1.0;
    return counts;
  }

  double Criterion(const std::vector<double>& counts, double total) const {
    return config.criterion == SplitCriterion::kInfoGain
               ? CountsEntropy(counts, total)
               : CountsGini(counts, total);
  }

  // Homogeneity gain of splitting `rows` on feature f: parent impurity
  // minus the count-weighted child impurity.
  double SplitGain(const std::vector<std::size_t>& rows, int f) const {
    const int card = data.schema().features()[f].cardinality;
    std::vector<std::vector<double>> child_counts(
        card, std::vector<double>(num_classes, 0.0));
    std::vector<double> child_totals(card, 0.0);
    for (std::size_t r : rows) {
      const auto code = static_cast<int>(data.value(r, f));
      child_counts[code][data.class_label(r)] += 1.0;
      child_totals[code] += 1.0;
    }
    const double total = static_cast<double>(rows.size());
    const std::vector<double> parent = ClassCounts(rows);
    double children = 0.0;
    for (int v = 0; v < card; ++v) {
      children +=
          (child_totals[v] / total) * Criterion(child_counts[v], child_totals[v]);
    }
    return Criterion(parent, total) - children;
  }

  // H(Yhat) over the full training set if `rows` were split on f: rows in
  // each child switch to the child majority, everything else keeps its
  // current frontier prediction.
  double CandidateOutputEntropy(const std::vector<std::size_t>& rows,
                                int f) const {
    const int card = data.schema().features()[f].cardinality;
    std::vector<std::vector<double>> child_counts(
        card, std::vector<double>(num_classes, 0.0));
    for (std::size_t r : rows) {
      child_counts[static_cast<int>(data.value(r, f))][data.class_label(r)] +=
          1.0;
    }
    std::vector<int> child_majority(card);
    for (int v = 0; v < card; ++v)
      child_majority[v] = Argmax(child_counts[v]);

    std::vector<double> pred_counts(num_classes, 0.0);
    for (int p : frontier_prediction) pred_counts[p] += 1.0;
    for (std::size_t r : rows) {
      pred_counts[frontier_prediction[r]] -= 1.0;
      pred_counts[child_majority[static_cast<int>(data.value(r, f))]] += 1.0;
    }
    return CountsEntropy(pred_counts, static_cast<double>(data.size()));
  }

  bool FeatureEligible(int f, int depth,
                       const std::vector<bool>& used) const {
    if (used[f]) return false;
    if (f == sensitive_index && depth < min_depth_for_sensitive) return false;
    return true;
  }

  std::unique_ptr<TreeNode> MakeLeaf(const std::vector<std::size_t>& rows,
                                     int depth) {
    auto node = std::make_unique<TreeNode>();
    node->feature_index = -1;
    node->depth = depth;
    node->class_counts = ClassCounts(rows);
    node->predicted_class = Argmax(node->class_counts);
    for (std::size_t r : rows) frontier_prediction[r] = node->predicted_class;
    return node;
  }

  std::unique_ptr<TreeNode> Build(const std::vector<std::size_t>& rows,
                                  int depth, std::vector<bool>& used) {
    const std::vector<double> counts = ClassCounts(rows);
    const int majority = Argmax(counts);
    // Keep the frontier predictions current before scoring candidates.
    for (std::size_t r : rows) frontier_prediction[r] = majority;

    bool pure = true;
    for (int c = 0; c < num_classes; ++c) {
      if (c != majority && counts[c] > 0.0) pure = false;
    }
    bool any_eligible = false;
    for (int f = 0; f < static_cast<int>(used.size()); ++f)
      if (FeatureEligible(f, depth, used)) any_eligible = true;

    if (rows.empty() || pure || depth >= config.max_depth ||
        rows.size() < static_cast<std::size_t>(config.min_samples_split) ||
        !any_eligible) {
      return MakeLeaf(rows, depth);
    }

    int best_feature = -1;
    double best_score = 0.0;
    for (int f = 0; f < static_cast<int>(used.size()); ++f) {
      if (!FeatureEligible(f, depth, used)) continue;
      double score = SplitGain(rows, f);
      if (config.lambda > 0.0)
        score -= config.lambda * CandidateOutputEntropy(rows, f);
      if (best_feature < 0 || score > best_score) {
        best_feature = f;
        best_score = score;
      }
    }

    auto node = std::make_unique<TreeNode>();
    node->feature_index = best_feature;
    node->depth = depth;
    node->class_counts = counts;
    node->predicted_class = majority;

    const int card = data.schema().features()[best_feature].cardinality;
    std::vector<std::vector<std::size_t>> child_rows(card);
    for (std::size_t r : rows)
      child_rows[static_cast<int>(data.value(r, best_feature))].push_back(r);

    // Commit the chosen split's predictions before recursing, so sibling
    // entropy evaluations see it.
    for (int v = 0; v < card; ++v) {
      if (child_rows[v].empty()) continue;
      const int child_majority = Argmax(ClassCounts(child_rows[v]));
      for (std::size_t r : child_rows[v])
        frontier_prediction[r] = child_majority;
    }

    used[best_feature] = true;
    node->children.resize(card);
    for (int v = 0; v < card; ++v) {
      node->children[v] = Build(child_rows[v], depth + 1, used);
    }
    used[best_feature] = false;
    return node;
  }
};

inline void CheckTreeInput(const Dataset& train, const TreeConfig& config,
                           const char* op) {
  if (!train.schema().is_classification())
    throw ConfigError(std::string(op) + ": needs a classification schema");
  if (!train.schema().all_features_categorical())
    throw ConfigError(std::string(op) +
                      ": continuous features are not supported by ID3");
  if (config.max_depth < 1) throw ConfigError("tree: max_depth must be >= 1");
  if (config.min_samples_split < 2)
    throw ConfigError("tree: min_samples_split must be >= 2");
  if (config.lambda < 0.0) throw ConfigError("tree: lambda must be >= 0");
}

}  // namespace tree_internal

// Entropy-penalized ID3. lambda = 0 is textbook ID3 with lowest-index tie
// breaking.
inline DecisionTree TrainId3(const Dataset& train, const TreeConfig& config) {
  tree_internal::CheckTreeInput(train, config, "train_id3");
  tree_internal::Builder builder(train, config, /*min_depth_sensitive=*/0);
  std::vector<bool> used(train.schema().num_features(), false);
  std::vector<std::size_t> rows(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) rows[r] = r;
  DecisionTree tree;
  tree.num_classes = train.schema().label().num_classes;
  tree.training_size = train.size();
  tree.criterion = config.criterion;
  tree.lambda = config.lambda;
  tree.root = builder.Build(rows, 0, used);
  return tree;
}

// Depth-restriction defense: the sensitive feature cannot be split above
// min_depth_for_sensitive (minimum-depth eligibility).
inline DecisionTree TrainPriority(const Dataset& train,
                                  const TreeConfig& config,
                                  int min_depth_for_sensitive) {
  tree_internal::CheckTreeInput(train, config, "train_priority");
  if (min_depth_for_sensitive < 0)
    throw ConfigError("train_priority: min depth must be >= 0");
  tree_internal::Builder builder(train, config, min_depth_for_sensitive);
  std::vector<bool> used(train.schema().num_features(), false);
  std::vector<std::size_t> rows(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) rows[r] = r;
  DecisionTree tree;
  tree.num_classes = train.schema().label().num_classes;
  tree.training_size = train.size();
  tree.criterion = config.criterion;
  tree.lambda = config.lambda;
  tree.root = builder.Build(rows, 0, used);
  return tree;
}

// Entropy of the tree's own predictions on a dataset, the quantity the
// lambda penalty controls.
inline double PredictionEntropy(const DecisionTree& tree, const Dataset& data) {
  std::vector<int> preds(data.size());
  for (std::size_t r = 0; r < data.size(); ++r)
    preds[r] = Predict(tree, data.row(r)).predicted_class;
  return EmpiricalEntropy(preds);
}

// --- Serialization ---------------------------------------------------------
// Trees serialize with their per-leaf class counts so the with-counts attack
// can run from the JSON alone.

inline nlohmann::json TreeNodeToJson(const TreeNode& node) {
  nlohmann::json j;
  j["depth"] = node.depth;
  j["counts"] = node.class_counts;
  j["predicted"] = node.predicted_class;
  if (!node.is_leaf()) {
    j["feature"] = node.feature_index;
    nlohmann::json children = nlohmann::json::array();
    for (const auto& child : node.children) {
      children.push_back(child ? TreeNodeToJson(*child) : nlohmann::json());
    }
    j["children"] = std::move(children);
  }
  return j;
}

inline nlohmann::json DecisionTreeToJson(const DecisionTree& tree) {
  return nlohmann::json{
      {"num_classes", tree.num_classes},
      {"training_size", tree.training_size},
      {"criterion",
       tree.criterion == SplitCriterion::kInfoGain ? "info_gain" : "gini"},
      {"lambda", tree.lambda},
      {"root", TreeNodeToJson(*tree.root)}};
}

inline std::unique_ptr<TreeNode> TreeNodeFromJson(const nlohmann::json& j) {
  auto node = std::make_unique<TreeNode>();
  node->depth = j.at("depth").get<int>();
  node->class_counts = j.at("counts").get<std::vector<double>>();
  node->predicted_class = j.at("predicted").get<int>();
  if (j.contains("feature")) {
    node->feature_index = j.at("feature").get<int>();
    for (const auto& child : j.at("children")) {
      node->children.push_back(child.is_null() ? nullptr
                                               : TreeNodeFromJson(child));
    }
  }
  return node;
}

inline DecisionTree DecisionTreeFromJson(const nlohmann::json& j) {
  DecisionTree tree;
  tree.num_classes = j.at("num_classes").get<int>();
  tree.training_size = j.at("training_size").get<std::size_t>();
  tree.criterion = j.at("criterion").get<std::string>() == "gini"
                       ? SplitCriterion::kGiniImpurity
                       : SplitCriterion::kInfoGain;
  tree.lambda = j.at("lambda").get<double>();
  tree.root = TreeNodeFromJson(j.at("root"));
  return tree;
}

}  // namespace midbench

#endif  // MIDBENCH_TREE_H_
