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

#include "fedgraph/gnn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

LossResult masked_sigmoid_cross_entropy(const DenseMatrix& logits,
                                        std::span<const double> labels) {
  require(logits.size() == labels.size(), ErrorCode::kDimensionMismatch,
          "sigmoid cross-entropy label count");
  LossResult r{0.0, DenseMatrix(logits.rows(), logits.cols()), 0};
  for (double y : labels) r.count += std::isnan(y) ? 0 : 1;
  require(r.count > 0, ErrorCode::kAllLabelsMasked, "every label is missing");
  const double inv = 1.0 / static_cast<double>(r.count);
  auto z = logits.values();
  auto g = r.grad.values();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double y = labels[i];
    if (std::isnan(y)) continue;
    // max(z, 0) - z y + log(1 + exp(-|z|))
    r.value += std::max(z[i], 0.0) - z[i] * y + std::log1p(std::exp(-std::abs(z[i])));
    const double p = z[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-z[i]))
                                 : std::exp(z[i]) / (1.0 + std::exp(z[i]));
    g[i] = (p - y) * inv;
  }
  r.value *= inv;
  return r;
}

LossResult softmax_cross_entropy(const DenseMatrix& logits, std::span<const int> labels) {
  require(logits.rows() == labels.size(), ErrorCode::kDimensionMismatch,
          "softmax cross-entropy label count");
  LossResult r{0.0, DenseMatrix(logits.rows(), logits.cols()), 0};
  for (int y : labels) r.count += y >= 0 ? 1 : 0;
  require(r.count > 0, ErrorCode::kAllLabelsMasked, "no labeled rows");
  const double inv = 1.0 / static_cast<double>(r.count);
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const int y = labels[i];
    if (y < 0) continue;
    require(static_cast<std::size_t>(y) < logits.cols(), ErrorCode::kIndexOutOfRange,
            "class index " + std::to_string(y));
    auto row = logits.row(i);
    const double top = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double v : row) total += std::exp(v - top);
    const double log_norm = top + std::log(total);
    r.value += log_norm - row[static_cast<std::size_t>(y)];
    auto g = r.grad.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      g[c] = std::exp(row[c] - log_norm) * inv;
    }
    g[static_cast<std::size_t>(y)] -= inv;
  }
  r.value *= inv;
  return r;
}

LossResult mean_squared_error(const DenseMatrix& prediction, std::span<const double> targets) {
  require(prediction.size() == targets.size(), ErrorCode::kDimensionMismatch,
          "regression target count");
  LossResult r{0.0, DenseMatrix(prediction.rows(), prediction.cols()), 0};
  for (double y : targets) r.count += std::isnan(y) ? 0 : 1;
  require(r.count > 0, ErrorCode::kAllLabelsMasked, "every target is missing");
  const double inv = 1.0 / static_cast<double>(r.count);
  auto p = prediction.values();
  auto g = r.grad.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::isnan(targets[i])) continue;
    const double diff = p[i] - targets[i];
    r.value += diff * diff;
    g[i] = 2.0 * diff * inv;
  }
  r.value *= inv;
  return r;
}

}  // namespace fedgraph
