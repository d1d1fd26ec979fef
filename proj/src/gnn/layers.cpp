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

#include "fedgraph/gnn/layers.hpp"

#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {
namespace {

// Rows of (A + I) in CSR order: the neighbour list with i merged in.
template <typename Fn>
void for_each_with_self(const Graph& g, Fn&& fn) {
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    bool placed = false;
    for (std::size_t j : g.neighbors(i)) {
      if (!placed && i < j) {
        fn(i, i);
        placed = true;
      }
      fn(i, j);
    }
    if (!placed) fn(i, i);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

void check_bias(std::span<const double> b, const DenseMatrix& w) {
  require(b.size() == w.cols(), ErrorCode::kDimensionMismatch,
          "bias length " + std::to_string(b.size()) + " != " + std::to_string(w.cols()));
}

}  // namespace

SparseMatrix normalize_adjacency(const Graph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(graph.degree(i) + 1));
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(graph.col_indices().size() + n);
  vals.reserve(graph.col_indices().size() + n);
  for_each_with_self(graph, [&](std::size_t i, std::size_t j) {
    cols.push_back(j);
    vals.push_back(inv_sqrt[i] * inv_sqrt[j]);
    offsets[i + 1]++;
  });
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix mean_aggregator(const Graph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::size_t> offsets(graph.row_offsets().begin(), graph.row_offsets().end());
  std::vector<std::size_t> cols(graph.col_indices().begin(), graph.col_indices().end());
  std::vector<double> vals(cols.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double w = graph.degree(i) ? 1.0 / static_cast<double>(graph.degree(i)) : 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) vals[k] = w;
  }
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix self_loop_structure(const Graph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  cols.reserve(graph.col_indices().size() + n);
  for_each_with_self(graph, [&](std::size_t i, std::size_t j) {
    cols.push_back(j);
    offsets[i + 1]++;
  });
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<double> vals(cols.size(), 1.0);
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

// ---- GCN -------------------------------------------------------------------

DenseMatrix gcn_layer(const DenseMatrix& h, const SparseMatrix& a_hat, const DenseMatrix& w,
                      std::span<const double> b, Activation act, GcnCache* cache) {
  check_bias(b, w);
  require(h.cols() == w.rows() && a_hat.cols() == h.rows(), ErrorCode::kDimensionMismatch,
          "gcn layer shapes");
  GcnCache local;
  GcnCache& c = cache ? *cache : local;
  // Multiply by the weight first when it shrinks the width; with wide
  // sparse inputs this keeps the propagation cheap.
  c.transform_first = w.rows() > w.cols();
  if (c.transform_first) {
    c.product = dense_matmul(h, w);
    c.pre = spmm(a_hat, c.product);
  } else {
    c.product = spmm(a_hat, h);
    c.pre = dense_matmul(c.product, w);
  }
  add_row_vector(c.pre, b);
  return activation_forward(c.pre, act);
}

LayerGrad gcn_layer_backward(const DenseMatrix& h, const SparseMatrix& a_hat,
                             const DenseMatrix& w, Activation act, const GcnCache& cache,
                             const DenseMatrix& grad_out) {
  const DenseMatrix gp = activation_backward(cache.pre, grad_out, act);
  LayerGrad out;
  out.d_bias = column_sums(gp);
  if (cache.transform_first) {
    const DenseMatrix dz = spmm(a_hat, gp);
    out.d_weights.push_back(matmul_tn(h, dz));
    out.d_input = matmul_nt(dz, w);
  } else {
    out.d_weights.push_back(matmul_tn(cache.product, gp));
    out.d_input = spmm(a_hat, matmul_nt(gp, w));
  }
  return out;
}

// ---- GraphSAGE ---------------------------------------------------------------

DenseMatrix sage_layer(const DenseMatrix& h, const SparseMatrix& mean_op,
                       const DenseMatrix& w_self, const DenseMatrix& w_neigh,
                       std::span<const double> b, Activation act, SageCache* cache) {
  check_bias(b, w_self);
  require(w_self.rows() == w_neigh.rows() && w_self.cols() == w_neigh.cols(),
          ErrorCode::kDimensionMismatch, "sage weight shapes differ");
  SageCache local;
  SageCache& c = cache ? *cache : local;
  c.neighbor_mean = spmm(mean_op, h);
  c.pre = dense_matmul(h, w_self);
  add_inplace(c.pre, dense_matmul(c.neighbor_mean, w_neigh));
  add_row_vector(c.pre, b);
  return activation_forward(c.pre, act);
}

LayerGrad sage_layer_backward(const DenseMatrix& h, const SparseMatrix& mean_op,
                              const DenseMatrix& w_self, const DenseMatrix& w_neigh,
                              Activation act, const SageCache& cache,
                              const DenseMatrix& grad_out) {
  const DenseMatrix gp = activation_backward(cache.pre, grad_out, act);
  LayerGrad out;
  out.d_bias = column_sums(gp);
  out.d_weights.push_back(matmul_tn(h, gp));
  out.d_weights.push_back(matmul_tn(cache.neighbor_mean, gp));
  out.d_input = matmul_nt(gp, w_self);
  add_inplace(out.d_input, spmm_backward(mean_op, matmul_nt(gp, w_neigh)));
  return out;
}

// ---- GAT ---------------------------------------------------------------------

DenseMatrix gat_layer(const DenseMatrix& h, const SparseMatrix& structure,
                      std::span<const GatHead> heads, double slope, HeadCombine combine,
                      Activation act, GatCache* cache) {
  require(!heads.empty(), ErrorCode::kInvalidParams, "GAT needs at least one head");
  require(structure.rows() == h.rows(), ErrorCode::kDimensionMismatch, "GAT structure rows");
  const std::size_t n = h.rows();
  const std::size_t f = heads.front().w.cols();
  const Activation lrelu = Activation::leaky_relu(slope);
  const auto offsets = structure.row_offsets();
  const auto cols = structure.col_indices();

  GatCache local;
  GatCache& c = cache ? *cache : local;
  c.heads.assign(heads.size(), {});
  c.pre = combine == HeadCombine::kConcat ? DenseMatrix(n, f * heads.size()) : DenseMatrix(n, f);
  const double mean_weight = 1.0 / static_cast<double>(heads.size());

  for (std::size_t hd = 0; hd < heads.size(); ++hd) {
    const GatHead& head = heads[hd];
    require(head.w.rows() == h.cols() && head.w.cols() == f && head.att_src.size() == f &&
                head.att_dst.size() == f,
            ErrorCode::kDimensionMismatch, "GAT head shapes");
    GatHeadCache& hc = c.heads[hd];
    hc.z = dense_matmul(h, head.w);
    std::vector<double> src(n), dst(n);
    for (std::size_t i = 0; i < n; ++i) {
      src[i] = dot(hc.z.row(i), head.att_src);
      dst[i] = dot(hc.z.row(i), head.att_dst);
    }
    hc.logits.resize(structure.nnz());
    std::vector<double> scores(structure.nnz());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        hc.logits[k] = src[i] + dst[cols[k]];
        scores[k] = lrelu.apply(hc.logits[k]);
      }
    }
    hc.alpha = row_softmax_segmented(scores, offsets);
    for (std::size_t i = 0; i < n; ++i) {
      auto out = c.pre.row(i);
      const std::size_t base = combine == HeadCombine::kConcat ? hd * f : 0;
      const double scale = combine == HeadCombine::kConcat ? 1.0 : mean_weight;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        auto zj = hc.z.row(cols[k]);
        const double a = hc.alpha[k] * scale;
        for (std::size_t t = 0; t < f; ++t) out[base + t] += a * zj[t];
      }
    }
  }
  return activation_forward(c.pre, act);
}

GatGrad gat_layer_backward(const DenseMatrix& h, const SparseMatrix& structure,
                           std::span<const GatHead> heads, double slope, HeadCombine combine,
                           Activation act, const GatCache& cache, const DenseMatrix& grad_out) {
  const std::size_t n = h.rows();
  const std::size_t f = heads.front().w.cols();
  const Activation lrelu = Activation::leaky_relu(slope);
  const auto offsets = structure.row_offsets();
  const auto cols = structure.col_indices();
  const DenseMatrix gp = activation_backward(cache.pre, grad_out, act);
  const double mean_weight = 1.0 / static_cast<double>(heads.size());

  GatGrad out;
  out.d_input = DenseMatrix(n, h.cols());
  for (std::size_t hd = 0; hd < heads.size(); ++hd) {
    const GatHead& head = heads[hd];
    const GatHeadCache& hc = cache.heads[hd];
    const std::size_t base = combine == HeadCombine::kConcat ? hd * f : 0;
    const double scale = combine == HeadCombine::kConcat ? 1.0 : mean_weight;

    DenseMatrix dz(n, f);
    std::vector<double> d_alpha(structure.nnz());
    for (std::size_t i = 0; i < n; ++i) {
      auto gi = gp.row(i).subspan(base, f);
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        const std::size_t j = cols[k];
        d_alpha[k] = scale * dot(gi, hc.z.row(j));
        auto dzj = dz.row(j);
        const double a = hc.alpha[k] * scale;
        for (std::size_t t = 0; t < f; ++t) dzj[t] += a * gi[t];
      }
    }
    std::vector<double> d_scores = row_softmax_segmented_backward(hc.alpha, d_alpha, offsets);
    std::vector<double> d_src(n, 0.0), d_dst(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        const double dl = d_scores[k] * lrelu.derivative(hc.logits[k]);
        d_src[i] += dl;
        d_dst[cols[k]] += dl;
      }
    }
    GatHeadGrad hg;
    hg.d_att_src.assign(f, 0.0);
    hg.d_att_dst.assign(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto zi = hc.z.row(i);
      auto dzi = dz.row(i);
      for (std::size_t t = 0; t < f; ++t) {
        hg.d_att_src[t] += d_src[i] * zi[t];
        hg.d_att_dst[t] += d_dst[i] * zi[t];
        dzi[t] += d_src[i] * head.att_src[t] + d_dst[i] * head.att_dst[t];
      }
    }
    hg.d_w = matmul_tn(h, dz);
    add_inplace(out.d_input, matmul_nt(dz, head.w));
    out.heads.push_back(std::move(hg));
  }
  return out;
}

// ---- SGC ---------------------------------------------------------------------

DenseMatrix propagate(const SparseMatrix& a_hat, const DenseMatrix& x, std::size_t hops) {
  DenseMatrix out = x;
  for (std::size_t k = 0; k < hops; ++k) out = spmm(a_hat, out);
  return out;
}

DenseMatrix sgc_forward(const DenseMatrix& x, const SparseMatrix& a_hat, std::size_t hops,
                        const DenseMatrix& w) {
  return dense_matmul(propagate(a_hat, x, hops), w);
}

}  // namespace fedgraph
