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

#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

struct LossResult {
  double value = 0.0;
  DenseMatrix grad;        // dL/dprediction, same shape as the prediction
  std::size_t count = 0;   // number of labels that contributed
};

// Mean sigmoid cross-entropy over the non-NaN labels. labels has one entry
// per prediction value. Throws AllLabelsMasked.
LossResult masked_sigmoid_cross_entropy(const DenseMatrix& logits,
                                        std::span<const double> labels);

// Mean softmax cross-entropy over rows whose label is >= 0. Throws
// AllLabelsMasked.
LossResult softmax_cross_entropy(const DenseMatrix& logits, std::span<const int> labels);

// Mean of (prediction - target)^2 over non-NaN targets. Throws
// AllLabelsMasked.
LossResult mean_squared_error(const DenseMatrix& prediction, std::span<const double> targets);

}  // namespace fedgraph
