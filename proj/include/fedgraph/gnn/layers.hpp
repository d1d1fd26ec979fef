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

#include "fedgraph/graph/graph.hpp"
#include "fedgraph/ndmath/dense.hpp"
#include "fedgraph/ndmath/ops.hpp"
#include "fedgraph/ndmath/sparse.hpp"

namespace fedgraph {

// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I.
SparseMatrix normalize_adjacency(const Graph& graph);

// Row i holds 1/deg(i) at every neighbour of i; isolated nodes get an
// empty row, i.e. a zero mean.
SparseMatrix mean_aggregator(const Graph& graph);

// Adjacency plus self-loops with unit values; the support of attention.
SparseMatrix self_loop_structure(const Graph& graph);

// ---- GCN: H' = act(A_hat H W + b) ------------------------------------------

struct GcnCache {
  bool transform_first = false;  // computed A_hat (H W) instead of (A_hat H) W
  DenseMatrix product;           // H W or A_hat H, whichever came first
  DenseMatrix pre;               // pre-activation
};

struct LayerGrad {
  DenseMatrix d_input;
  std::vector<DenseMatrix> d_weights;  // same order as the forward weights
  std::vector<double> d_bias;
};

DenseMatrix gcn_layer(const DenseMatrix& h, const SparseMatrix& a_hat, const DenseMatrix& w,
                      std::span<const double> b, Activation act, GcnCache* cache = nullptr);
// a_hat must be symmetric.
LayerGrad gcn_layer_backward(const DenseMatrix& h, const SparseMatrix& a_hat,
                             const DenseMatrix& w, Activation act, const GcnCache& cache,
                             const DenseMatrix& grad_out);

// ---- GraphSAGE (mean): H'_i = act(W_self^T h_i + W_neigh^T mean_j h_j + b) --

struct SageCache {
  DenseMatrix neighbor_mean;
  DenseMatrix pre;
};

DenseMatrix sage_layer(const DenseMatrix& h, const SparseMatrix& mean_op,
                       const DenseMatrix& w_self, const DenseMatrix& w_neigh,
                       std::span<const double> b, Activation act, SageCache* cache = nullptr);
// d_weights = {d_w_self, d_w_neigh}.
LayerGrad sage_layer_backward(const DenseMatrix& h, const SparseMatrix& mean_op,
                              const DenseMatrix& w_self, const DenseMatrix& w_neigh,
                              Activation act, const SageCache& cache,
                              const DenseMatrix& grad_out);

// ---- GAT ---------------------------------------------------------------

struct GatHead {
  DenseMatrix w;                 // in x f
  std::vector<double> att_src;   // f
  std::vector<double> att_dst;   // f
};

enum class HeadCombine { kConcat, kMean };

struct GatHeadCache {
  DenseMatrix z;                 // H W
  std::vector<double> logits;    // pre-LeakyReLU scores, one per structure entry
  std::vector<double> alpha;     // attention, one per structure entry
};

struct GatCache {
  std::vector<GatHeadCache> heads;
  DenseMatrix pre;
};

// Attention runs over `structure` (adjacency with self-loops). Scores are
// e_ij = leaky_relu(a_src . z_i + a_dst . z_j) normalised per row.
DenseMatrix gat_layer(const DenseMatrix& h, const SparseMatrix& structure,
                      std::span<const GatHead> heads, double slope, HeadCombine combine,
                      Activation act, GatCache* cache = nullptr);

struct GatHeadGrad {
  DenseMatrix d_w;
  std::vector<double> d_att_src;
  std::vector<double> d_att_dst;
};

struct GatGrad {
  DenseMatrix d_input;
  std::vector<GatHeadGrad> heads;
};

GatGrad gat_layer_backward(const DenseMatrix& h, const SparseMatrix& structure,
                           std::span<const GatHead> heads, double slope, HeadCombine combine,
                           Activation act, const GatCache& cache, const DenseMatrix& grad_out);

// ---- SGC: A_hat^K X W ---------------------------------------------------

DenseMatrix propagate(const SparseMatrix& a_hat, const DenseMatrix& x, std::size_t hops);
DenseMatrix sgc_forward(const DenseMatrix& x, const SparseMatrix& a_hat, std::size_t hops,
                        const DenseMatrix& w);

}  // namespace fedgraph
