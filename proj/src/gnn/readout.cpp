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

#include "fedgraph/gnn/readout.hpp"

#include <algorithm>
#include <string>

#include "fedgraph/common/error.hpp"
#include "fedgraph/ndmath/ops.hpp"

namespace fedgraph {

DenseMatrix mlp_forward(const DenseMatrix& x, const Mlp& mlp, MlpCache* cache) {
  MlpCache local;
  MlpCache& c = cache ? *cache : local;
  c.input = x;
  c.pre_hidden = dense_matmul(x, mlp.w1);
  add_row_vector(c.pre_hidden, mlp.b1);
  c.hidden = activation_forward(c.pre_hidden, Activation::relu());
  DenseMatrix out = dense_matmul(c.hidden, mlp.w2);
  add_row_vector(out, mlp.b2);
  return out;
}

MlpGrad mlp_backward(const Mlp& mlp, const MlpCache& cache, const DenseMatrix& grad_out) {
  MlpGrad g;
  g.d_w2 = matmul_tn(cache.hidden, grad_out);
  g.d_b2 = column_sums(grad_out);
  const DenseMatrix d_pre =
      activation_backward(cache.pre_hidden, matmul_nt(grad_out, mlp.w2), Activation::relu());
  g.d_w1 = matmul_tn(cache.input, d_pre);
  g.d_b1 = column_sums(d_pre);
  g.d_input = matmul_nt(d_pre, mlp.w1);
  return g;
}

DenseMatrix pool_nodes(const DenseMatrix& h, Pooling pooling) {
  require(h.rows() > 0, ErrorCode::kEmptyGraph, "cannot pool a graph with no nodes");
  DenseMatrix out(1, h.cols());
  std::vector<double> column(h.rows());
  for (std::size_t j = 0; j < h.cols(); ++j) {
    for (std::size_t i = 0; i < h.rows(); ++i) column[i] = h(i, j);
    std::sort(column.begin(), column.end());
    double acc = 0.0;
    for (double v : column) acc += v;
    out(0, j) = pooling == Pooling::kMean ? acc / static_cast<double>(h.rows()) : acc;
  }
  return out;
}

DenseMatrix pool_nodes_backward(const DenseMatrix& grad, std::size_t num_nodes, Pooling pooling) {
  const double scale = pooling == Pooling::kMean ? 1.0 / static_cast<double>(num_nodes) : 1.0;
  DenseMatrix out(num_nodes, grad.cols());
  for (std::size_t i = 0; i < num_nodes; ++i)
    for (std::size_t j = 0; j < grad.cols(); ++j) out(i, j) = grad(0, j) * scale;
  return out;
}

DenseMatrix readout_graph(const DenseMatrix& h, Pooling pooling, const Mlp& mlp,
                          GraphReadoutCache* cache) {
  GraphReadoutCache local;
  GraphReadoutCache& c = cache ? *cache : local;
  c.pooled = pool_nodes(h, pooling);
  return mlp_forward(c.pooled, mlp, &c.mlp);
}

DenseMatrix readout_graph_backward(const Mlp& mlp, std::size_t num_nodes, Pooling pooling,
                                   const GraphReadoutCache& cache, const DenseMatrix& grad_out,
                                   MlpGrad* mlp_grad) {
  MlpGrad g = mlp_backward(mlp, cache.mlp, grad_out);
  DenseMatrix dh = pool_nodes_backward(g.d_input, num_nodes, pooling);
  if (mlp_grad) *mlp_grad = std::move(g);
  return dh;
}

DenseMatrix readout_node(const DenseMatrix& h, const DenseMatrix& w, std::span<const double> b) {
  DenseMatrix out = dense_matmul(h, w);
  add_row_vector(out, b);
  return out;
}

DenseMatrix readout_link(const DenseMatrix& h, std::size_t src, std::size_t dst, const Mlp& mlp,
                         MlpCache* cache) {
  require(src < h.rows() && dst < h.rows(), ErrorCode::kIndexOutOfRange,
          "link endpoint (" + std::to_string(src) + "," + std::to_string(dst) + ")");
  DenseMatrix pair(1, 2 * h.cols());
  auto a = h.row(src);
  auto b = h.row(dst);
  std::copy(a.begin(), a.end(), pair.row(0).begin());
  std::copy(b.begin(), b.end(), pair.row(0).begin() + static_cast<std::ptrdiff_t>(h.cols()));
  return mlp_forward(pair, mlp, cache);
}

DenseMatrix readout_link_backward(const Mlp& mlp, std::size_t num_nodes, std::size_t src,
                                  std::size_t dst, const MlpCache& cache,
                                  const DenseMatrix& grad_out, MlpGrad* mlp_grad) {
  MlpGrad g = mlp_backward(mlp, cache, grad_out);
  const std::size_t d = g.d_input.cols() / 2;
  DenseMatrix dh(num_nodes, d);
  for (std::size_t t = 0; t < d; ++t) {
    dh(src, t) += g.d_input(0, t);
    dh(dst, t) += g.d_input(0, d + t);
  }
  if (mlp_grad) *mlp_grad = std::move(g);
  return dh;
}

}  // namespace fedgraph
