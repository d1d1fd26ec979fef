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

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include <gtest/gtest.h>

#include "fedgraph/common/error.hpp"
#include "fedgraph/graph/dataset.hpp"
#include "fedgraph/graph/graph.hpp"
#include "test_util.hpp"

namespace fedgraph {
namespace {

GraphInput input_with(std::size_t n, std::vector<Edge> edges) {
  GraphInput in;
  in.num_nodes = n;
  in.edges = std::move(edges);
  in.node_features = DenseMatrix(n, 1, 1.0);
  return in;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::kInvalidParams;
}

TEST(BuildGraph, SingleNodeHasEmptyAdjacency) {
  Graph g = build_graph(input_with(1, {}));
  EXPECT_EQ(g.num_nodes(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
  EXPECT_EQ(g.degree(0), 0u);
}

TEST(BuildGraph, EdgesAreSymmetrized) {
  Graph g = build_graph(input_with(2, {{0, 1}}));
  ASSERT_EQ(g.neighbors(0).size(), 1u);
  ASSERT_EQ(g.neighbors(1).size(), 1u);
  EXPECT_EQ(g.neighbors(0)[0], 1u);
  EXPECT_EQ(g.neighbors(1)[0], 0u);
}

TEST(BuildGraph, DuplicatesReversedEdgesAndSelfLoopsAreCanonicalized) {
  Graph g = build_graph(input_with(3, {{2, 0}, {0, 2}, {1, 1}, {0, 2}, {1, 0}}));
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_FALSE(g.has_edge(1, 1));
  EXPECT_TRUE(std::is_sorted(g.neighbors(0).begin(), g.neighbors(0).end()));
  EXPECT_EQ(std::vector<std::size_t>(g.neighbors(0).begin(), g.neighbors(0).end()),
            (std::vector<std::size_t>{1, 2}));
}

TEST(BuildGraph, Errors) {
  EXPECT_EQ(code_of([] { build_graph(input_with(3, {{0, 5}})); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([] {
              GraphInput in = input_with(3, {});
              in.node_features = DenseMatrix(2, 1);
              build_graph(in);
            }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([] {
              GraphInput in = input_with(2, {});
              in.node_features(1, 0) = std::numeric_limits<double>::quiet_NaN();
              build_graph(in);
            }),
            ErrorCode::kNonFiniteFeature);
}

TEST(BuildGraph, DegreeMatchesSymmetrizedEdgeCount) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(40);
    std::vector<Edge> edges;
    for (int e = 0; e < 60; ++e) edges.emplace_back(rng.uniform_index(n), rng.uniform_index(n));
    Graph g = build_graph(input_with(n, edges));
    std::set<Edge> sym;
    for (auto [u, v] : edges) {
      if (u == v) continue;
      sym.insert({u, v});
      sym.insert({v, u});
    }
    for (std::size_t u = 0; u < n; ++u) {
      const auto expected = std::count_if(sym.begin(), sym.end(),
                                          [u](const Edge& e) { return e.first == u; });
      EXPECT_EQ(g.degree(u), static_cast<std::size_t>(expected));
      for (std::size_t v : g.neighbors(u)) EXPECT_TRUE(g.has_edge(v, u));
    }
  }
}

TEST(KhopEgo, ZeroHopsIsCenterOnly) {
  Graph g = build_graph(input_with(3, {{0, 1}, {1, 2}}));
  Graph ego = khop_ego(g, 1, 0);
  EXPECT_EQ(ego.num_nodes(), 1u);
  EXPECT_EQ(ego.original_ids()[0], 1u);
}

TEST(KhopEgo, PathOneHop) {
  Graph g = build_graph(input_with(3, {{0, 1}, {1, 2}}));
  Graph ego = khop_ego(g, 0, 1);
  EXPECT_EQ(ego.num_nodes(), 2u);
  EXPECT_EQ(ego.original_ids(), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(ego.has_edge(0, 1));
}

TEST(KhopEgo, LargeKGivesConnectedComponent) {
  Graph g = build_graph(input_with(6, {{0, 1}, {1, 2}, {2, 3}, {4, 5}}));
  Graph ego = khop_ego(g, 2, 10);
  std::vector<std::size_t> ids = ego.original_ids();
  EXPECT_EQ(ids[0], 2u);
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(ego.num_edges(), 3u);
}

TEST(KhopEgo, CenterOutOfRangeThrows) {
  Graph g = build_graph(input_with(2, {}));
  EXPECT_EQ(code_of([&] { khop_ego(g, 2, 1); }), ErrorCode::kIndexOutOfRange);
}

// Independent adjacency-list BFS.
std::set<std::size_t> bfs_ball(const std::vector<std::vector<std::size_t>>& adj,
                               std::size_t center, std::size_t k) {
  std::vector<std::size_t> dist(adj.size(), SIZE_MAX);
  std::queue<std::size_t> q;
  dist[center] = 0;
  q.push(center);
  std::set<std::size_t> ball;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    ball.insert(u);
    for (std::size_t v : adj[u]) {
      if (dist[v] == SIZE_MAX && dist[u] + 1 <= k) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return ball;
}

TEST(KhopEgo, MatchesBruteForceBfsOnRandomGraphs) {
  Rng rng(2);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(49);
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng.uniform() < 3.0 / static_cast<double>(n)) {
          edges.emplace_back(u, v);
          adj[u].push_back(v);
          adj[v].push_back(u);
        }
    Graph g = build_graph(input_with(n, edges));
    for (std::size_t k : {0u, 1u, 2u, 3u}) {
      for (std::size_t c = 0; c < n; ++c) {
        Graph ego = khop_ego(g, c, k);
        std::set<std::size_t> got(ego.original_ids().begin(), ego.original_ids().end());
        EXPECT_EQ(got, bfs_ball(adj, c, k));
        EXPECT_EQ(ego.original_ids()[0], c);
      }
    }
  }
}

TEST(InducedSubgraph, AllNodesGivesCopy) {
  Graph g = build_graph(input_with(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  std::vector<std::size_t> all{0, 1, 2, 3};
  Graph s = induced_subgraph(g, all);
  EXPECT_EQ(s.undirected_edges(), g.undirected_edges());
}

TEST(InducedSubgraph, TriangleEdgeAndEmptySet) {
  Graph g = build_graph(input_with(3, {{0, 1}, {1, 2}, {0, 2}}));
  std::vector<std::size_t> two{0, 1};
  EXPECT_EQ(induced_subgraph(g, two).num_edges(), 1u);
  EXPECT_EQ(code_of([&] { induced_subgraph(g, std::vector<std::size_t>{}); }),
            ErrorCode::kEmptySet);
  EXPECT_EQ(code_of([&] { induced_subgraph(g, std::vector<std::size_t>{0, 7}); }),
            ErrorCode::kIndexOutOfRange);
}

TEST(InducedSubgraph, PreservesAdjacency) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = testing::random_graph(25, 0.2, 2, rng);
    std::vector<std::size_t> nodes;
    for (std::size_t u = 0; u < 25; ++u)
      if (rng.uniform() < 0.5) nodes.push_back(u);
    if (nodes.empty()) nodes.push_back(0);
    rng.shuffle(nodes);
    Graph s = induced_subgraph(g, nodes);
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = 0; b < nodes.size(); ++b)
        EXPECT_EQ(s.has_edge(a, b), g.has_edge(nodes[a], nodes[b]));
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      EXPECT_EQ(s.original_ids()[a], nodes[a]);
      EXPECT_EQ(s.node_features().row(a)[0], g.node_features().row(nodes[a])[0]);
    }
  }
}

TEST(Dataset, ValidationAndUnits) {
  GraphDataset d;
  d.task = TaskType::kNodeClassification;
  d.num_tasks_or_classes = 2;
  d.node_feature_dim = 1;
  GraphInput in = input_with(2, {{0, 1}});
  in.node_labels = std::vector<int>{0, 2};
  d.graphs.push_back(build_graph(in));
  EXPECT_EQ(code_of([&] { validate_dataset(d); }), ErrorCode::kSchemaViolation);

  GraphDataset link;
  link.task = TaskType::kLinkRegression;
  link.node_feature_dim = 1;
  GraphInput l = input_with(3, {{0, 1}});
  l.edge_labels = {{0, 1, 4.0}, {1, 2, 3.0}};
  link.graphs.push_back(build_graph(l));
  validate_dataset(link);
  EXPECT_EQ(enumerate_units(link), (std::vector<TrainingUnit>{{0, 0}, {0, 1}}));
}

}  // namespace
}  // namespace fedgraph
