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

#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

struct EvalResult {
  std::string metric;
  double value = 0.0;
  std::size_t support = 0;
};

// Probability that a random positive outranks a random negative, ties
// counting one half (Mann-Whitney U over average ranks). labels are 0/1.
// Throws SingleClass, DimensionMismatch.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Mean AUC over the label columns that contain both classes; NaN labels
// are skipped. Throws SingleClass when no column qualifies.
double roc_auc_multitask(const DenseMatrix& scores, const DenseMatrix& labels);

// F1 from TP/FP/FN pooled over all classes. Throws EmptyInput,
// DimensionMismatch.
double micro_f1(std::span<const int> predicted, std::span<const int> truth);

struct RegressionMetrics {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
};

// Throws EmptyInput, DimensionMismatch.
RegressionMetrics regression_metrics(std::span<const double> predicted,
                                     std::span<const double> targets);

}  // namespace fedgraph
