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
#include <vector>

#include "fedgraph/common/rng.hpp"
#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

// Softmax over contiguous segments [offsets[s], offsets[s+1]). The segment
// maximum is subtracted before exponentiation.
std::vector<double> row_softmax_segmented(std::span<const double> values,
                                          std::span<const std::size_t> offsets);

// Backward of the segmented softmax given its output y and dL/dy:
// dL/dx_i = y_i * (g_i - sum_k y_k g_k) within each segment.
std::vector<double> row_softmax_segmented_backward(std::span<const double> output,
                                                   std::span<const double> grad_out,
                                                   std::span<const std::size_t> offsets);

enum class ActivationKind { kIdentity, kRelu, kLeakyRelu };

struct Activation {
  ActivationKind kind = ActivationKind::kIdentity;
  double slope = 0.2;

  static Activation identity() { return {ActivationKind::kIdentity, 0.0}; }
  static Activation relu() { return {ActivationKind::kRelu, 0.0}; }
  static Activation leaky_relu(double slope) { return {ActivationKind::kLeakyRelu, slope}; }

  double apply(double x) const {
    switch (kind) {
      case ActivationKind::kRelu: return x > 0.0 ? x : 0.0;
      case ActivationKind::kLeakyRelu: return x >= 0.0 ? x : slope * x;
      case ActivationKind::kIdentity: break;
    }
    return x;
  }
  // Derivative evaluated at the pre-activation input.
  double derivative(double x) const {
    switch (kind) {
      case ActivationKind::kRelu: return x > 0.0 ? 1.0 : 0.0;
      case ActivationKind::kLeakyRelu: return x >= 0.0 ? 1.0 : slope;
      case ActivationKind::kIdentity: break;
    }
    return 1.0;
  }
};

DenseMatrix activation_forward(const DenseMatrix& pre, Activation act);
// dL/dpre from dL/dout and the cached pre-activation values.
DenseMatrix activation_backward(const DenseMatrix& pre, const DenseMatrix& grad_out,
                                Activation act);

// Inverted dropout: kept entries are scaled by 1/(1-rate) so the
// expectation is preserved. mask holds 1 for kept and 0 for dropped.
struct DropoutResult {
  DenseMatrix output;
  DenseMatrix mask;
  double scale = 1.0;
};
DropoutResult dropout_forward(const DenseMatrix& x, double rate, Rng& rng);
DenseMatrix dropout_backward(const DropoutResult& forward, const DenseMatrix& grad_out);

}  // namespace fedgraph
