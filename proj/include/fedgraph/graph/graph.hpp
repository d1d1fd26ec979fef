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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

using Edge = std::pair<std::size_t, std::size_t>;

// A regression target on a node pair (link rating).
struct EdgeLabel {
  std::size_t src = 0;
  std::size_t dst = 0;
  double value = 0.0;

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

// Everything needed to construct a Graph. Edges may be listed in one
// direction only, repeated, or contain self-loops; construction
// canonicalizes them.
struct GraphInput {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  DenseMatrix node_features;
  std::optional<DenseMatrix> edge_features;  // one row per input edge
  std::optional<std::vector<int>> node_labels;  // -1 marks an unlabeled node
  std::optional<std::vector<double>> graph_label;  // NaN marks a missing task
  std::vector<EdgeLabel> edge_labels;
  std::optional<int> category;
  std::optional<std::vector<int>> node_categories;
  std::vector<std::size_t> original_ids;  // defaults to 0..n-1
};

// Immutable undirected graph in CSR form. Self-loops are never stored.
class Graph {
 public:
  Graph() = default;

  std::size_t num_nodes() const { return num_nodes_; }
  // Number of undirected edges.
  std::size_t num_edges() const { return cols_.size() / 2; }
  std::size_t degree(std::size_t u) const { return offsets_[u + 1] - offsets_[u]; }
  std::span<const std::size_t> neighbors(std::size_t u) const {
    return std::span<const std::size_t>(cols_).subspan(offsets_[u], degree(u));
  }
  bool has_edge(std::size_t u, std::size_t v) const;

  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::size_t> col_indices() const { return cols_; }

  const DenseMatrix& node_features() const { return node_features_; }
  std::size_t feature_dim() const { return node_features_.cols(); }
  // Aligned with col_indices().
  const std::optional<DenseMatrix>& edge_features() const { return edge_features_; }
  const std::optional<std::vector<int>>& node_labels() const { return node_labels_; }
  const std::optional<std::vector<double>>& graph_label() const { return graph_label_; }
  const std::vector<EdgeLabel>& edge_labels() const { return edge_labels_; }
  const std::optional<int>& category() const { return category_; }
  const std::optional<std::vector<int>>& node_categories() const { return node_categories_; }
  const std::vector<std::size_t>& original_ids() const { return original_ids_; }

  // Each undirected edge once, as (u, v) with u < v, in CSR order.
  std::vector<Edge> undirected_edges() const;

  // Copy with the edge label list replaced; endpoints must be valid.
  Graph with_edge_labels(std::vector<EdgeLabel> labels) const;
  // Copy with node labels replaced.
  Graph with_node_labels(std::vector<int> labels) const;
  // Same nodes and labels over a new edge set; edge features are dropped.
  Graph with_edges(std::vector<Edge> edges) const;

  friend Graph build_graph(GraphInput input);

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  DenseMatrix node_features_;
  std::optional<DenseMatrix> edge_features_;
  std::optional<std::vector<int>> node_labels_;
  std::optional<std::vector<double>> graph_label_;
  std::vector<EdgeLabel> edge_labels_;
  std::optional<int> category_;
  std::optional<std::vector<int>> node_categories_;
  std::vector<std::size_t> original_ids_;
};

// Symmetrizes, deduplicates and sorts the adjacency, drops self-loops, and
// validates shapes and finiteness. Throws IndexOutOfRange,
// DimensionMismatch or NonFiniteFeature.
Graph build_graph(GraphInput input);

// Induced subgraph on all nodes within BFS distance k of center. Node 0 of
// the result is the center; the rest follow BFS discovery order.
Graph khop_ego(const Graph& graph, std::size_t center, std::size_t k);

// Induced subgraph on the given nodes, relabeled 0..|nodes|-1 in the given order.
// Edge labels with both endpoints inside are kept. Throws EmptySet,
// IndexOutOfRange, or InvalidParams on a repeated node.
Graph induced_subgraph(const Graph& graph, std::span<const std::size_t> nodes);

}  // namespace fedgraph
