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

#include "fedgraph/graph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_map>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  if (u >= num_nodes_ || v >= num_nodes_) return false;
  auto n = neighbors(u);
  return std::binary_search(n.begin(), n.end(), v);
}

std::vector<Edge> Graph::undirected_edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t u = 0; u < num_nodes_; ++u)
    for (std::size_t v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::with_edge_labels(std::vector<EdgeLabel> labels) const {
  for (const auto& l : labels) {
    require(l.src < num_nodes_ && l.dst < num_nodes_, ErrorCode::kIndexOutOfRange,
            "edge label endpoint");
    require(std::isfinite(l.value), ErrorCode::kNonFiniteFeature, "edge label value");
  }
  Graph g = *this;
  g.edge_labels_ = std::move(labels);
  return g;
}

Graph Graph::with_node_labels(std::vector<int> labels) const {
  require(labels.size() == num_nodes_, ErrorCode::kDimensionMismatch, "node label count");
  Graph g = *this;
  g.node_labels_ = std::move(labels);
  return g;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  GraphInput in;
  in.num_nodes = num_nodes_;
  in.edges = std::move(edges);
  in.node_features = node_features_;
  in.node_labels = node_labels_;
  in.graph_label = graph_label_;
  in.edge_labels = edge_labels_;
  in.category = category_;
  in.node_categories = node_categories_;
  in.original_ids = original_ids_;
  return build_graph(std::move(in));
}

Graph build_graph(GraphInput input) {
  const std::size_t n = input.num_nodes;
  require(input.node_features.rows() == n, ErrorCode::kDimensionMismatch,
          "feature rows " + std::to_string(input.node_features.rows()) + " != num_nodes " +
              std::to_string(n));
  require(input.node_features.all_finite(), ErrorCode::kNonFiniteFeature,
          "node features contain NaN or Inf");
  for (const auto& [u, v] : input.edges) {
    require(u < n && v < n, ErrorCode::kIndexOutOfRange,
            "edge (" + std::to_string(u) + "," + std::to_string(v) + ") with num_nodes=" +
                std::to_string(n));
  }
  if (input.edge_features) {
    require(input.edge_features->rows() == input.edges.size(), ErrorCode::kDimensionMismatch,
            "edge feature rows must equal the number of input edges");
    require(input.edge_features->all_finite(), ErrorCode::kNonFiniteFeature,
            "edge features contain NaN or Inf");
  }
  if (input.node_labels) {
    require(input.node_labels->size() == n, ErrorCode::kDimensionMismatch, "node label count");
  }
  if (input.node_categories) {
    require(input.node_categories->size() == n, ErrorCode::kDimensionMismatch,
            "node category count");
  }
  for (const auto& l : input.edge_labels) {
    require(l.src < n && l.dst < n, ErrorCode::kIndexOutOfRange, "edge label endpoint");
    require(std::isfinite(l.value), ErrorCode::kNonFiniteFeature, "edge label value");
  }
  if (input.original_ids.empty()) {
    input.original_ids.resize(n);
    std::iota(input.original_ids.begin(), input.original_ids.end(), std::size_t{0});
  }
  require(input.original_ids.size() == n, ErrorCode::kDimensionMismatch, "original id count");

  // (u, v, source edge index) for both directions; stable sort keeps the
  // first occurrence of a duplicate in front.
  struct Directed {
    std::size_t u, v, source;
  };
  std::vector<Directed> directed;
  directed.reserve(input.edges.size() * 2);
  for (std::size_t i = 0; i < input.edges.size(); ++i) {
    const auto [u, v] = input.edges[i];
    if (u == v) continue;
    directed.push_back({u, v, i});
    directed.push_back({v, u, i});
  }
  std::stable_sort(directed.begin(), directed.end(), [](const Directed& a, const Directed& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  directed.erase(std::unique(directed.begin(), directed.end(),
                             [](const Directed& a, const Directed& b) {
                               return a.u == b.u && a.v == b.v;
                             }),
                 directed.end());

  Graph g;
  g.num_nodes_ = n;
  g.offsets_.assign(n + 1, 0);
  g.cols_.reserve(directed.size());
  for (const auto& d : directed) {
    g.offsets_[d.u + 1]++;
    g.cols_.push_back(d.v);
  }
  for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] += g.offsets_[u];
  if (input.edge_features) {
    const auto& src = *input.edge_features;
    DenseMatrix ef(directed.size(), src.cols());
    for (std::size_t k = 0; k < directed.size(); ++k) {
      auto from = src.row(directed[k].source);
      std::copy(from.begin(), from.end(), ef.row(k).begin());
    }
    g.edge_features_ = std::move(ef);
  }
  g.node_features_ = std::move(input.node_features);
  g.node_labels_ = std::move(input.node_labels);
  g.graph_label_ = std::move(input.graph_label);
  g.edge_labels_ = std::move(input.edge_labels);
  g.category_ = input.category;
  g.node_categories_ = std::move(input.node_categories);
  g.original_ids_ = std::move(input.original_ids);
  return g;
}

Graph induced_subgraph(const Graph& graph, std::span<const std::size_t> nodes) {
  require(!nodes.empty(), ErrorCode::kEmptySet, "induced subgraph on an empty node set");
  std::unordered_map<std::size_t, std::size_t> local;
  local.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require(nodes[i] < graph.num_nodes(), ErrorCode::kIndexOutOfRange,
            "node " + std::to_string(nodes[i]));
    require(local.emplace(nodes[i], i).second, ErrorCode::kInvalidParams,
            "node " + std::to_string(nodes[i]) + " listed twice");
  }

  GraphInput in;
  in.num_nodes = nodes.size();
  in.node_features = DenseMatrix(nodes.size(), graph.feature_dim());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto src = graph.node_features().row(nodes[i]);
    std::copy(src.begin(), src.end(), in.node_features.row(i).begin());
  }
  std::vector<std::size_t> edge_rows;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t u = nodes[i];
    const auto nbrs = graph.neighbors(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      auto it = local.find(nbrs[k]);
      if (it == local.end() || it->second <= i) continue;
      in.edges.emplace_back(i, it->second);
      edge_rows.push_back(graph.row_offsets()[u] + k);
    }
  }
  if (graph.edge_features()) {
    DenseMatrix ef(edge_rows.size(), graph.edge_features()->cols());
    for (std::size_t k = 0; k < edge_rows.size(); ++k) {
      auto src = graph.edge_features()->row(edge_rows[k]);
      std::copy(src.begin(), src.end(), ef.row(k).begin());
    }
    in.edge_features = std::move(ef);
  }
  if (graph.node_labels()) {
    std::vector<int> labels(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) labels[i] = (*graph.node_labels())[nodes[i]];
    in.node_labels = std::move(labels);
  }
  if (graph.node_categories()) {
    std::vector<int> cats(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) cats[i] = (*graph.node_categories())[nodes[i]];
    in.node_categories = std::move(cats);
  }
  for (const auto& l : graph.edge_labels()) {
    auto s = local.find(l.src);
    auto d = local.find(l.dst);
    if (s != local.end() && d != local.end()) in.edge_labels.push_back({s->second, d->second, l.value});
  }
  in.graph_label = graph.graph_label();
  in.category = graph.category();
  in.original_ids.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) in.original_ids[i] = graph.original_ids()[nodes[i]];
  return build_graph(std::move(in));
}

Graph khop_ego(const Graph& graph, std::size_t center, std::size_t k) {
  require(center < graph.num_nodes(), ErrorCode::kIndexOutOfRange,
          "ego center " + std::to_string(center));
  std::vector<std::size_t> dist(graph.num_nodes(), SIZE_MAX);
  std::vector<std::size_t> order{center};
  dist[center] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t u = order[head];
    if (dist[u] == k) continue;
    for (std::size_t v : graph.neighbors(u)) {
      if (dist[v] != SIZE_MAX) continue;
      dist[v] = dist[u] + 1;
      order.push_back(v);
    }
  }
  return induced_subgraph(graph, order);
}

}  // namespace fedgraph
