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

#include "fedgraph/ndmath/ops.hpp"

#include <algorithm>
#include <cmath>

#include "fedgraph/common/error.hpp"

namespace fedgraph {
namespace {

void check_offsets(std::size_t n, std::span<const std::size_t> offsets) {
  require(!offsets.empty() && offsets.front() == 0 && offsets.back() == n,
          ErrorCode::kDimensionMismatch, "segment offsets must span all values");
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    require(offsets[s] < offsets[s + 1], ErrorCode::kEmptySegment,
            "segment " + std::to_string(s) + " is empty");
  }
}

}  // namespace

std::vector<double> row_softmax_segmented(std::span<const double> values,
                                          std::span<const std::size_t> offsets) {
  check_offsets(values.size(), offsets);
  std::vector<double> out(values.size());
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    const std::size_t lo = offsets[s];
    const std::size_t hi = offsets[s + 1];
    const double top = *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(lo),
                                         values.begin() + static_cast<std::ptrdiff_t>(hi));
    double total = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = std::exp(values[i] - top);
      total += out[i];
    }
    for (std::size_t i = lo; i < hi; ++i) out[i] /= total;
  }
  return out;
}

std::vector<double> row_softmax_segmented_backward(std::span<const double> output,
                                                   std::span<const double> grad_out,
                                                   std::span<const std::size_t> offsets) {
  require(output.size() == grad_out.size(), ErrorCode::kDimensionMismatch,
          "softmax gradient length");
  check_offsets(output.size(), offsets);
  std::vector<double> grad(output.size());
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    double dot = 0.0;
    for (std::size_t i = offsets[s]; i < offsets[s + 1]; ++i) dot += output[i] * grad_out[i];
    for (std::size_t i = offsets[s]; i < offsets[s + 1]; ++i)
      grad[i] = output[i] * (grad_out[i] - dot);
  }
  return grad;
}

DenseMatrix activation_forward(const DenseMatrix& pre, Activation act) {
  DenseMatrix out = pre;
  for (double& v : out.values()) v = act.apply(v);
  return out;
}

DenseMatrix activation_backward(const DenseMatrix& pre, const DenseMatrix& grad_out,
                                Activation act) {
  require(pre.rows() == grad_out.rows() && pre.cols() == grad_out.cols(),
          ErrorCode::kDimensionMismatch, "activation gradient shape");
  DenseMatrix grad = grad_out;
  auto g = grad.values();
  auto x = pre.values();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= act.derivative(x[i]);
  return grad;
}

DropoutResult dropout_forward(const DenseMatrix& x, double rate, Rng& rng) {
  require(rate >= 0.0 && rate < 1.0, ErrorCode::kInvalidRate,
          "dropout rate must lie in [0, 1), got " + std::to_string(rate));
  DropoutResult r{x, DenseMatrix(x.rows(), x.cols(), 1.0), 1.0};
  if (rate == 0.0) return r;
  r.scale = 1.0 / (1.0 - rate);
  auto out = r.output.values();
  auto mask = r.mask.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.uniform() < rate) {
      mask[i] = 0.0;
      out[i] = 0.0;
    } else {
      out[i] *= r.scale;
    }
  }
  return r;
}

DenseMatrix dropout_backward(const DropoutResult& forward, const DenseMatrix& grad_out) {
  DenseMatrix grad = grad_out;
  auto g = grad.values();
  auto mask = forward.mask.values();
  require(g.size() == mask.size(), ErrorCode::kDimensionMismatch, "dropout gradient shape");
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= mask[i] * forward.scale;
  return grad;
}

}  // namespace fedgraph
