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

#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

enum class Pooling { kSum, kMean };

// Two-layer perceptron x -> relu(x W1 + b1) W2 + b2, row-wise.
struct Mlp {
  DenseMatrix w1;
  std::vector<double> b1;
  DenseMatrix w2;
  std::vector<double> b2;
};

struct MlpCache {
  DenseMatrix input;
  DenseMatrix pre_hidden;
  DenseMatrix hidden;
};

struct MlpGrad {
  DenseMatrix d_input;
  DenseMatrix d_w1;
  std::vector<double> d_b1;
  DenseMatrix d_w2;
  std::vector<double> d_b2;
};

DenseMatrix mlp_forward(const DenseMatrix& x, const Mlp& mlp, MlpCache* cache = nullptr);
MlpGrad mlp_backward(const Mlp& mlp, const MlpCache& cache, const DenseMatrix& grad_out);

// 1 x d pooled row. Each column is summed in sorted order, so any row
// permutation of h yields a bit-identical result. Throws EmptyGraph.
DenseMatrix pool_nodes(const DenseMatrix& h, Pooling pooling);
// Spreads a 1 x d pooled gradient back over num_nodes rows.
DenseMatrix pool_nodes_backward(const DenseMatrix& grad, std::size_t num_nodes, Pooling pooling);

struct GraphReadoutCache {
  DenseMatrix pooled;
  MlpCache mlp;
};

// Graph-level prediction: pool, then the MLP head; 1 x num_tasks.
DenseMatrix readout_graph(const DenseMatrix& h, Pooling pooling, const Mlp& mlp,
                          GraphReadoutCache* cache = nullptr);
// dL/dH.
DenseMatrix readout_graph_backward(const Mlp& mlp, std::size_t num_nodes, Pooling pooling,
                                   const GraphReadoutCache& cache, const DenseMatrix& grad_out,
                                   MlpGrad* mlp_grad);

// Per-node logits H W + b.
DenseMatrix readout_node(const DenseMatrix& h, const DenseMatrix& w, std::span<const double> b);

// Scalar score MLP([h_src ; h_dst]); 1 x 1. Throws IndexOutOfRange.
DenseMatrix readout_link(const DenseMatrix& h, std::size_t src, std::size_t dst, const Mlp& mlp,
                         MlpCache* cache = nullptr);
// dL/dH; only the two endpoint rows are non-zero.
DenseMatrix readout_link_backward(const Mlp& mlp, std::size_t num_nodes, std::size_t src,
                                  std::size_t dst, const MlpCache& cache,
                                  const DenseMatrix& grad_out, MlpGrad* mlp_grad);

}  // namespace fedgraph
