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
#ifndef MIDBENCH_METRICS_H_
#define MIDBENCH_METRICS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "midbench/error.h"

namespace midbench {

// Per-bin calibration summary. Bins are the half-open intervals
// ((m-1)/M, m/M]; a sample with confidence exactly 0 lands in bin 1.
struct CalibrationBin {
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double accuracy = 0.0;
};

struct CalibrationReport {
  std::size_t num_bins = 0;
  std::vector<CalibrationBin> bins;
  double ece = 0.0;
};

// Expected calibration error over top-class confidences:
// sum_m |B_m|/n * |acc(B_m) - conf(B_m)|.
inline CalibrationReport Ece(const std::vector<double>& confidences,
                             const std::vector<bool>& correct,
                             std::size_t num_bins = 10) {
  if (confidences.empty()) throw DataError("ece: empty input");
  if (confidences.size() != correct.size())
    throw DataError("ece: length mismatch");
  if (num_bins < 1) throw ConfigError("ece: need at least one bin");
  CalibrationReport report;
  report.num_bins = num_bins;
  report.bins.resize(num_bins);
  std::vector<double> conf_sum(num_bins, 0.0);
  std::vector<std::size_t> hits(num_bins, 0);
  for (std::size_t i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    if (!(c >= 0.0 && c <= 1.0))
      throw DataError("ece: confidence outside [0, 1]");
    std::size_t bin =
        c <= 0.0 ? 0
                 : static_cast<std::size_t>(
                       std::ceil(c * static_cast<double>(num_bins))) -
                       1;
    bin = std::min(bin, num_bins - 1);
    ++report.bins[bin].count;
    conf_sum[bin] += c;
    if (correct[i]) ++hits[bin];
  }
  const double n = static_cast<double>(confidences.size());
  for (std::size_t m = 0; m < num_bins; ++m) {
    CalibrationBin& b = report.bins[m];
    if (b.count > 0) {
      b.mean_confidence = conf_sum[m] / static_cast<double>(b.count);
      b.accuracy = static_cast<double>(hits[m]) / static_cast<double>(b.count);
      report.ece += (static_cast<double>(b.count) / n) *
                    std::abs(b.accuracy - b.mean_confidence);
    }
  }
  return report;
}

struct AurocResult {
  double value = 0.5;
  std::vector<int> skipped_classes;  // no positives or no negatives
};

namespace internal {

// Binary AUROC by the Mann-Whitney identity with midranks for ties.
inline double BinaryAuroc(const std::vector<double>& scores,
                          const std::vector<bool>& positive) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 +
                       1.0;  // 1-based midrank
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (positive[k]) {
      rank_sum += rank[k];
      ++n_pos;
    }
  }
  const std::size_t n_neg = n - n_pos;
  const double u = rank_sum - static_cast<double>(n_pos) *
                                  (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace internal

// One-vs-rest macro AUROC. `scores[i]` is the per-class score vector for
// sample i; class c is ranked by scores[i][c]. Classes missing positives or
// negatives cannot be ranked and are skipped (reported in the result).
inline AurocResult AurocOvrMacro(const std::vector<std::vector<double>>& scores,
                                 const std::vector<int>& labels) {
  if (scores.empty() || scores.size() != labels.size())
    throw DataError("auroc: empty input or length mismatch");
  const std::size_t num_classes = scores[0].size();
  std::set<int> present(labels.begin(), labels.end());
  if (present.size() < 2)
    throw DataError("auroc: need at least two classes present");
  AurocResult result;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::vector<double> class_scores(scores.size());
    std::vector<bool> positive(scores.size());
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].size() != num_classes)
        throw DataError("auroc: ragged score vectors");
      class_scores[i] = scores[i][c];
      positive[i] = labels[i] == static_cast<int>(c);
      if (positive[i]) ++n_pos;
    }
    if (n_pos == 0 || n_pos == scores.size()) {
      result.skipped_classes.push_back(static_cast<int>(c));
      continue;
    }
    total += internal::BinaryAuroc(class_scores, positive);
    ++used;
  }
  result.value = used > 0 ? total / static_cast<double>(used) : 0.5;
  return result;
}

inline double Accuracy(const std::vector<int>& pred,
                       const std::vector<int>& labels) {
  if (pred.empty() || pred.size() != labels.size())
    throw DataError("accuracy: empty input or length mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

inline double Mse(const std::vector<double>& pred,
                  const std::vector<double>& labels) {
  if (pred.empty() || pred.size() != labels.size())
    throw DataError("mse: empty input or length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - labels[i];
    total += d * d;
  }
  return total / static_cast<double>(pred.size());
}

struct F1Result {
  double macro = 0.0;
  std::map<int, double> per_class;
  // Classes with neither true nor predicted positives contribute F1 = 0.
  std::vector<int> zero_support_classes;
};

inline F1Result F1Macro(const std::vector<int>& pred,
                        const std::vector<int>& labels) {
  if (pred.empty() || pred.size() != labels.size())
    throw DataError("f1: empty input or length mismatch");
  std::set<int> classes(labels.begin(), labels.end());
  classes.insert(pred.begin(), pred.end());
  F1Result result;
  for (int c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == c && labels[i] == c) ++tp;
      if (pred[i] == c && labels[i] != c) ++fp;
      if (pred[i] != c && labels[i] == c) ++fn;
    }
    double f1 = 0.0;
    if (tp == 0 && fp == 0 && fn == 0) {
      result.zero_support_classes.push_back(c);
    } else if (tp > 0) {
      f1 = 2.0 * static_cast<double>(tp) /
           (2.0 * static_cast<double>(tp) + static_cast<double>(fp) +
            static_cast<double>(fn));
    }
    result.per_class[c] = f1;
    result.macro += f1;
  }
  result.macro /= static_cast<double>(classes.size());
  return result;
}

struct L2Distances {
  double min = 0.0;
  double mean = 0.0;
};

// Euclidean distances from one reconstruction to a reference set, reported
// as (min, mean) over the set.
inline L2Distances L2FeatureDistance(
    const std::vector<double>& recon,
    const std::vector<std::vector<double>>& references) {
  if (references.empty()) throw DataError("l2: empty reference set");
  L2Distances out;
  out.min = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const auto& ref : references) {
    if (ref.size() != recon.size()) throw DataError("l2: dimension mismatch");
    double sq = 0.0;
    for (std::size_t j = 0; j < recon.size(); ++j) {
      const double d = recon[j] - ref[j];
      sq += d * d;
    }
    const double dist = std::sqrt(sq);
    out.min = std::min(out.min, dist);
    total += dist;
  }
  out.mean = total / static_cast<double>(references.size());
  return out;
}

}  // namespace midbench

#endif  // MIDBENCH_METRICS_H_
