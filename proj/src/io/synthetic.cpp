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

#include "fedgraph/io/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "fedgraph/common/error.hpp"
#include "fedgraph/common/rng.hpp"

namespace fedgraph {
namespace {

void check(bool ok, const std::string& message) { require(ok, ErrorCode::kInvalidParams, message); }

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

// Balanced labels 0..k-1 over n slots in seeded order.
std::vector<int> balanced_labels(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % k);
  rng.shuffle(labels);
  return labels;
}

}  // namespace

GraphDataset gen_sbm_node(const SbmParams& p, std::uint64_t seed) {
  check(p.num_nodes >= 1, "sbm: num_nodes must be >= 1");
  check(p.num_blocks >= 1 && p.num_blocks <= p.num_nodes, "sbm: need 1 <= num_blocks <= num_nodes");
  check(is_probability(p.p_in) && is_probability(p.p_out), "sbm: probabilities must lie in [0, 1]");
  check(std::isfinite(p.feature_noise) && p.feature_noise >= 0.0, "sbm: feature_noise must be >= 0");
  Rng rng(derive_seed(seed, "sbm"));
  GraphInput in;
  in.num_nodes = p.num_nodes;
  std::vector<int> blocks = balanced_labels(p.num_nodes, p.num_blocks, rng);
  for (std::size_t u = 0; u < p.num_nodes; ++u) {
    for (std::size_t v = u + 1; v < p.num_nodes; ++v) {
      const double prob = blocks[u] == blocks[v] ? p.p_in : p.p_out;
      if (rng.uniform() < prob) in.edges.emplace_back(u, v);
    }
  }
  in.node_features = DenseMatrix(p.num_nodes, p.num_blocks);
  for (std::size_t u = 0; u < p.num_nodes; ++u) {
    for (std::size_t c = 0; c < p.num_blocks; ++c) {
      const double signal = static_cast<int>(c) == blocks[u] ? 1.0 : 0.0;
      in.node_features(u, c) = signal + p.feature_noise * rng.normal();
    }
  }
  in.node_labels = blocks;
  GraphDataset d;
  d.task = TaskType::kNodeClassification;
  d.num_tasks_or_classes = p.num_blocks;
  d.node_feature_dim = p.num_blocks;
  d.graphs.push_back(build_graph(std::move(in)));
  return d;
}

GraphDataset gen_motif_graph(const MotifParams& p, std::uint64_t seed) {
  check(p.num_graphs >= 1, "motif: num_graphs must be >= 1");
  check(p.min_nodes >= 3 && p.max_nodes >= p.min_nodes, "motif: need 3 <= min_nodes <= max_nodes");
  check(p.max_degree_feature >= 1, "motif: max_degree_feature must be >= 1");
  check(is_probability(p.chord_probability), "motif: chord_probability must lie in [0, 1]");
  Rng rng(derive_seed(seed, "motif"));
  const std::vector<int> families = balanced_labels(p.num_graphs, 3, rng);
  const std::size_t dim = p.max_degree_feature + 1;

  GraphDataset d;
  d.task = TaskType::kGraphClassification;
  d.num_tasks_or_classes = 3;
  d.node_feature_dim = dim;
  d.class_names = {"cycle", "star", "path"};
  for (int family : families) {
    const std::size_t n = p.min_nodes + rng.uniform_index(p.max_nodes - p.min_nodes + 1);
    std::set<Edge> edges;
    auto add = [&](std::size_t u, std::size_t v) {
      if (u != v) edges.insert({std::min(u, v), std::max(u, v)});
    };
    for (std::size_t k = 0; k + 1 < n; ++k) add(family == 1 ? 0 : k, k + 1);
    if (family == 0) add(n - 1, 0);
    if (rng.uniform() < p.chord_probability) {
      add(rng.uniform_index(n), rng.uniform_index(n));
    }
    // Random relabeling so node order carries no signal.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    GraphInput in;
    in.num_nodes = n;
    std::vector<std::size_t> degree(n, 0);
    for (auto [u, v] : edges) {
      in.edges.emplace_back(perm[u], perm[v]);
      ++degree[perm[u]];
      ++degree[perm[v]];
    }
    in.node_features = DenseMatrix(n, dim);
    for (std::size_t u = 0; u < n; ++u) in.node_features(u, std::min(degree[u], p.max_degree_feature)) = 1.0;
    std::vector<double> label(3, 0.0);
    label[static_cast<std::size_t>(family)] = 1.0;
    in.graph_label = label;
    in.category = static_cast<int>(n - p.min_nodes);
    d.graphs.push_back(build_graph(std::move(in)));
  }
  return d;
}

BipartiteData gen_bipartite_rating(const BipartiteParams& p, std::uint64_t seed) {
  check(p.num_users >= 1 && p.num_items >= 1, "bipartite: need users and items");
  check(p.num_categories >= 1 && p.num_categories <= p.num_items,
        "bipartite: need 1 <= num_categories <= num_items");
  check(p.ratings_per_user >= 1 && p.ratings_per_user <= p.num_items,
        "bipartite: need 1 <= ratings_per_user <= num_items");
  check(std::isfinite(p.noise) && p.noise >= 0.0, "bipartite: noise must be >= 0");
  Rng rng(derive_seed(seed, "bipartite"));
  const std::size_t users = p.num_users;
  const std::size_t items = p.num_items;
  BipartiteData out;
  out.user_factors = DenseMatrix(users, 2);
  out.item_factors = DenseMatrix(items, 2);
  for (double& v : out.user_factors.values()) v = rng.normal();
  for (double& v : out.item_factors.values()) v = rng.normal();
  const std::vector<int> item_category = balanced_labels(items, p.num_categories, rng);

  const std::size_t n = users + items;
  const std::size_t dim = 4 + p.num_categories;
  GraphInput in;
  in.num_nodes = n;
  in.node_features = DenseMatrix(n, dim);
  std::vector<int> node_categories(n, -1);
  for (std::size_t u = 0; u < users; ++u) {
    in.node_features(u, 0) = 1.0;
    in.node_features(u, 2) = out.user_factors(u, 0) + 0.5 * rng.normal();
    in.node_features(u, 3) = out.user_factors(u, 1) + 0.5 * rng.normal();
  }
  for (std::size_t i = 0; i < items; ++i) {
    const std::size_t node = users + i;
    in.node_features(node, 1) = 1.0;
    in.node_features(node, 2) = out.item_factors(i, 0) + 0.5 * rng.normal();
    in.node_features(node, 3) = out.item_factors(i, 1) + 0.5 * rng.normal();
    in.node_features(node, 4 + static_cast<std::size_t>(item_category[i])) = 1.0;
    node_categories[node] = item_category[i];
  }
  std::vector<std::size_t> catalogue(items);
  for (std::size_t u = 0; u < users; ++u) {
    std::iota(catalogue.begin(), catalogue.end(), std::size_t{0});
    rng.shuffle(catalogue);
    std::vector<std::size_t> chosen(catalogue.begin(),
                                    catalogue.begin() + static_cast<std::ptrdiff_t>(p.ratings_per_user));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t i : chosen) {
      const double affinity = out.user_factors(u, 0) * out.item_factors(i, 0) +
                              out.user_factors(u, 1) * out.item_factors(i, 1);
      const double raw = 3.0 + affinity + p.noise * rng.normal();
      const double rating = std::clamp(std::round(raw), 1.0, 5.0);
      in.edges.emplace_back(u, users + i);
      in.edge_labels.push_back({u, users + i, rating});
    }
  }
  in.node_categories = std::move(node_categories);
  out.dataset.task = TaskType::kLinkRegression;
  out.dataset.num_tasks_or_classes = 1;
  out.dataset.node_feature_dim = dim;
  out.dataset.graphs.push_back(build_graph(std::move(in)));
  return out;
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "sbm_node" || name == "sbm") return SyntheticKind::kSbmNode;
  if (name == "motif_graph" || name == "motif") return SyntheticKind::kMotifGraph;
  if (name == "bipartite_rating" || name == "bipartite") return SyntheticKind::kBipartiteRating;
  fail(ErrorCode::kInvalidParams, "unknown synthetic kind '" + std::string(name) + "'");
}

std::string_view synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kSbmNode: return "sbm_node";
    case SyntheticKind::kMotifGraph: return "motif_graph";
    case SyntheticKind::kBipartiteRating: return "bipartite_rating";
  }
  return "unknown";
}

GraphDataset gen_synthetic(SyntheticKind kind, std::size_t size, std::size_t classes,
                           std::uint64_t seed) {
  check(size >= 1, "size must be >= 1");
  switch (kind) {
    case SyntheticKind::kSbmNode: {
      SbmParams p;
      p.num_nodes = size;
      if (classes) p.num_blocks = classes;
      return gen_sbm_node(p, seed);
    }
    case SyntheticKind::kMotifGraph: {
      check(classes == 0 || classes == 3, "motif graphs always have 3 classes");
      MotifParams p;
      p.num_graphs = size;
      return gen_motif_graph(p, seed);
    }
    case SyntheticKind::kBipartiteRating: {
      BipartiteParams p;
      p.num_users = size;
      p.num_items = std::max<std::size_t>(p.ratings_per_user, size * 2 / 3);
      if (classes) p.num_categories = classes;
      p.num_categories = std::min(p.num_categories, p.num_items);
      return gen_bipartite_rating(p, seed).dataset;
    }
  }
  fail(ErrorCode::kInvalidParams, "unknown synthetic kind");
}

}  // namespace fedgraph
