/*
 * Copyright 2026 The FedGraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedgraph/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  require(scores.size() == labels.size(), ErrorCode::kDimensionMismatch,
          "roc_auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks are 1-based; tied scores share the mean rank.
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        positive_rank_sum += mean_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  require(positives > 0 && negatives > 0, ErrorCode::kSingleClass,
          "roc_auc needs at least one positive and one negative");
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

double roc_auc_multitask(const DenseMatrix& scores, const DenseMatrix& labels) {
  require(scores.rows() == labels.rows() && scores.cols() == labels.cols(),
          ErrorCode::kDimensionMismatch, "roc_auc_multitask: shape mismatch");
  double total = 0.0;
  std::size_t columns = 0;
  for (std::size_t c = 0; c < scores.cols(); ++c) {
    std::vector<double> s;
    std::vector<int> y;
    bool has_pos = false, has_neg = false;
    for (std::size_t r = 0; r < scores.rows(); ++r) {
      if (std::isnan(labels(r, c))) continue;
      s.push_back(scores(r, c));
      y.push_back(labels(r, c) >= 0.5 ? 1 : 0);
      (y.back() == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) continue;
    total += roc_auc(s, y);
    ++columns;
  }
  require(columns > 0, ErrorCode::kSingleClass, "no label column has both classes");
  return total / static_cast<double>(columns);
}

double micro_f1(std::span<const int> predicted, std::span<const int> truth) {
  require(!truth.empty(), ErrorCode::kEmptyInput, "micro_f1 on empty input");
  require(predicted.size() == truth.size(), ErrorCode::kDimensionMismatch,
          "micro_f1: length mismatch");
  std::map<int, std::size_t> tp, fp, fn;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) {
      ++tp[truth[i]];
    } else {
      ++fp[predicted[i]];
      ++fn[truth[i]];
    }
  }
  std::size_t t = 0, f_pos = 0, f_neg = 0;
  for (auto [c, v] : tp) t += v;
  for (auto [c, v] : fp) f_pos += v;
  for (auto [c, v] : fn) f_neg += v;
  const double denom = 2.0 * static_cast<double>(t) + static_cast<double>(f_pos + f_neg);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(t) / denom;
}

RegressionMetrics regression_metrics(std::span<const double> predicted,
                                     std::span<const double> targets) {
  require(!targets.empty(), ErrorCode::kEmptyInput, "regression_metrics on empty input");
  require(predicted.size() == targets.size(), ErrorCode::kDimensionMismatch,
          "regression_metrics: length mismatch");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d = predicted[i] - targets[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const double n = static_cast<double>(targets.size());
  RegressionMetrics m;
  m.mae = abs_sum / n;
  m.mse = sq_sum / n;
  m.rmse = std::sqrt(m.mse);
  return m;
}

}  // namespace fedgraph
