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
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fedgraph/common/error.hpp"
#include "fedgraph/common/rng.hpp"
#include "fedgraph/partition/partition.hpp"

namespace fedgraph {
namespace {

GraphDataset binary_toy(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  GraphDataset d;
  d.task = TaskType::kGraphClassification;
  d.num_tasks_or_classes = 1;
  d.node_feature_dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    GraphInput in;
    in.num_nodes = 2;
    in.edges = {{0, 1}};
    in.node_features = DenseMatrix(2, 1, static_cast<double>(i));
    in.graph_label = std::vector<double>{static_cast<double>(rng.uniform_index(2))};
    in.category = static_cast<int>(i % 3);
    d.graphs.push_back(build_graph(in));
  }
  return d;
}

void expect_partition_of(const Assignment& a, std::size_t n) {
  std::vector<std::size_t> all;
  for (const auto& c : a) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(n);
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  EXPECT_EQ(all, expected);
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

TEST(Split, TenSamplesGiveEightOneOne) {
  SplitIndices s = split_indices(10, {}, 3);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.val.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.val.begin(), s.val.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 10u);
}

TEST(Split, OneSampleGoesToTrain) {
  SplitIndices s = split_indices(1, {}, 3);
  EXPECT_EQ(s.train, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(s.val.empty());
  EXPECT_TRUE(s.test.empty());
}

TEST(Split, DeterministicAndValidated) {
  EXPECT_EQ(split_indices(57, {}, 11), split_indices(57, {}, 11));
  EXPECT_NE(split_indices(57, {}, 11), split_indices(57, {}, 12));
  EXPECT_EQ(code_of([] { split_indices(0, {}, 1); }), ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([] { split_indices(5, {0.5, 0.5, 0.5}, 1); }), ErrorCode::kInvalidParams);
}

TEST(Split, FloorSizesForManyCounts) {
  for (std::size_t n = 1; n < 200; ++n) {
    SplitIndices s = split_indices(n, {0.7, 0.2, 0.1}, n);
    EXPECT_EQ(s.val.size(), static_cast<std::size_t>(std::floor(n * 0.2 + 1e-9)));
    EXPECT_EQ(s.test.size(), static_cast<std::size_t>(std::floor(n * 0.1 + 1e-9)));
    EXPECT_EQ(s.train.size() + s.val.size() + s.test.size(), n);
  }
}

TEST(Lda, SingleClientGetsEverything) {
  std::vector<int> labels{0, 1, 1, 0, 2};
  Assignment a = lda_partition(labels, 1, 0.1, 4);
  EXPECT_EQ(a, (Assignment{{0, 1, 2, 3, 4}}));
}

TEST(Lda, ErrorsAndDeterminism) {
  std::vector<int> labels(30);
  for (std::size_t i = 0; i < 30; ++i) labels[i] = static_cast<int>(i % 3);
  EXPECT_EQ(lda_partition(labels, 4, 0.5, 9), lda_partition(labels, 4, 0.5, 9));
  EXPECT_EQ(code_of([&] { lda_partition(labels, 4, 0.0, 9); }), ErrorCode::kInvalidAlpha);
  EXPECT_EQ(code_of([&] { lda_partition(labels, 4, -1.0, 9); }), ErrorCode::kInvalidAlpha);
  EXPECT_EQ(code_of([&] { lda_partition(labels, 31, 1.0, 9); }),
            ErrorCode::kMoreClientsThanSamples);
}

TEST(Lda, ExactPartitionWithNoEmptyClient) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 10 + rng.uniform_index(200);
    const std::size_t clients = 1 + rng.uniform_index(10);
    std::vector<int> labels(n);
    for (int& y : labels) y = static_cast<int>(rng.uniform_index(4));
    const double alpha = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    Assignment a = lda_partition(labels, clients, alpha, rng.next_u64());
    ASSERT_EQ(a.size(), clients);
    expect_partition_of(a, n);
    for (const auto& c : a) EXPECT_FALSE(c.empty());
  }
}

double total_variation(const std::vector<std::size_t>& hist, const std::vector<double>& global) {
  const double total = std::accumulate(hist.begin(), hist.end(), 0.0);
  double tv = 0.0;
  for (std::size_t c = 0; c < global.size(); ++c) {
    tv += std::abs(static_cast<double>(hist[c]) / total - global[c]);
  }
  return 0.5 * tv;
}

TEST(Lda, HugeAlphaMatchesGlobalDistribution) {
  std::vector<int> labels(1000);
  for (std::size_t i = 0; i < 1000; ++i) labels[i] = static_cast<int>(i % 2);
  double mean_tv = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Assignment a = lda_partition(labels, 2, 1e6, seed);
    auto hist = class_histogram(labels, a);
    for (const auto& h : hist) mean_tv += total_variation(h, {0.5, 0.5});
  }
  mean_tv /= 20.0;
  EXPECT_LT(mean_tv, 0.05);
}

double mean_max_class_proportion(std::span<const int> labels, std::size_t clients, double alpha,
                                 std::uint64_t seed) {
  Assignment a = lda_partition(labels, clients, alpha, seed);
  auto hist = class_histogram(labels, a);
  double acc = 0.0;
  for (const auto& h : hist) {
    const double total = std::accumulate(h.begin(), h.end(), 0.0);
    acc += static_cast<double>(*std::max_element(h.begin(), h.end())) / total;
  }
  return acc / static_cast<double>(hist.size());
}

TEST(Lda, SkewDecreasesWithAlpha) {
  std::vector<int> labels(600);
  for (std::size_t i = 0; i < 600; ++i) labels[i] = static_cast<int>(i % 3);
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    double previous = 2.0;
    for (double alpha : {0.1, 1.0, 10.0, 1000.0}) {
      double mean = 0.0;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        mean += mean_max_class_proportion(labels, 5, alpha, 1000 * rep + seed);
      }
      mean /= 20.0;
      EXPECT_LE(mean, previous) << "alpha " << alpha;
      previous = mean;
    }
  }
}

TEST(Uniform, SizesDifferByAtMostOne) {
  Assignment a = uniform_partition(8, 4, 1);
  for (const auto& c : a) EXPECT_EQ(c.size(), 2u);
  Assignment b = uniform_partition(9, 4, 1);
  std::vector<std::size_t> sizes;
  for (const auto& c : b) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 2, 2, 3}));
  expect_partition_of(b, 9);
  EXPECT_EQ(uniform_partition(50, 3, 8), uniform_partition(50, 3, 8));
  EXPECT_EQ(code_of([] { uniform_partition(2, 3, 1); }), ErrorCode::kMoreClientsThanSamples);
}

TEST(Metadata, OneCategoryPerClient) {
  std::vector<std::optional<int>> cats{0, 1, 2, 0, 1, 2, 2};
  Assignment a = metadata_partition(cats, 3, 5);
  expect_partition_of(a, 7);
  for (const auto& c : a) {
    std::set<int> seen;
    for (std::size_t i : c) seen.insert(*cats[i]);
    EXPECT_EQ(seen.size(), 1u);
  }
  // Largest category (2) goes first.
  EXPECT_EQ(a[0], (std::vector<std::size_t>{2, 5, 6}));
}

TEST(Metadata, SingleCategoryLeavesClientEmpty) {
  std::vector<std::optional<int>> cats{4, 4, 4};
  Assignment a = metadata_partition(cats, 2, 1);
  EXPECT_EQ(a[0].size(), 3u);
  EXPECT_TRUE(a[1].empty());
  EXPECT_EQ(metadata_partition(cats, 2, 1), a);
  std::vector<std::optional<int>> missing{1, std::nullopt};
  EXPECT_EQ(code_of([&] { metadata_partition(missing, 2, 1); }), ErrorCode::kMissingCategory);
}

GraphDataset node_dataset(std::size_t n, std::vector<Edge> edges) {
  GraphDataset d;
  d.task = TaskType::kNodeClassification;
  d.num_tasks_or_classes = 2;
  d.node_feature_dim = 1;
  GraphInput in;
  in.num_nodes = n;
  in.edges = std::move(edges);
  in.node_features = DenseMatrix(n, 1, 1.0);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
  in.node_labels = labels;
  d.graphs.push_back(build_graph(in));
  return d;
}

TEST(Ego, StarCenterIsWholeStar) {
  GraphDataset star = node_dataset(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  GraphDataset egos = sample_ego_networks(star, 5, 1, 3);
  ASSERT_EQ(egos.graphs.size(), 5u);
  EXPECT_EQ(egos.graphs[0].num_nodes(), 5u);  // egos sorted, center 0 first
  EXPECT_EQ(egos.graphs[1].num_nodes(), 2u);
  for (const Graph& g : egos.graphs) {
    const auto& labels = *g.node_labels();
    EXPECT_EQ(labels[0], static_cast<int>(g.original_ids()[0] % 2));
    for (std::size_t i = 1; i < labels.size(); ++i) EXPECT_EQ(labels[i], -1);
  }
}

TEST(Ego, ZeroHopsAndFullCoverage) {
  GraphDataset path = node_dataset(4, {{0, 1}, {1, 2}, {2, 3}});
  for (const Graph& g : sample_ego_networks(path, 3, 0, 1).graphs) EXPECT_EQ(g.num_nodes(), 1u);
  for (const Graph& g : sample_ego_networks(path, 4, 10, 1).graphs) EXPECT_EQ(g.num_nodes(), 4u);
  EXPECT_EQ(code_of([&] { sample_ego_networks(path, 5, 1, 1); }), ErrorCode::kTooManyEgos);
}

TEST(Shards, SingleUniformClientMatchesCentralizedSplit) {
  GraphDataset d = binary_toy(40, 1);
  PartitionSpec spec;
  spec.seed = 21;
  Partitioned p = make_shards(d, spec);
  ASSERT_EQ(p.shards.size(), 1u);
  SplitIndices central = split_indices(40, {}, derive_seed(21, "split", 0));
  EXPECT_EQ(p.manifest.splits[0], central);
  EXPECT_EQ(p.shards[0].num_train_samples, 32u);
}

TEST(Shards, TrainSizesAreConserved) {
  GraphDataset d = binary_toy(123, 2);
  for (auto scheme : {PartitionScheme::kLda, PartitionScheme::kUniform, PartitionScheme::kMetadata}) {
    for (bool global : {false, true}) {
      PartitionSpec spec;
      spec.scheme = scheme;
      spec.num_clients = 3;
      spec.seed = 4;
      spec.global_split = global;
      Partitioned p = make_shards(d, spec);
      std::size_t total = 0;
      std::vector<std::size_t> all;
      for (std::size_t k = 0; k < 3; ++k) {
        total += p.shards[k].num_train_samples;
        EXPECT_EQ(p.shards[k].train.graphs.size(), p.shards[k].num_train_samples);
        all.insert(all.end(), p.manifest.assignments[k].begin(), p.manifest.assignments[k].end());
      }
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all.size(), 123u);
      EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
      if (global) {
        EXPECT_EQ(total, split_indices(123, {}, derive_seed(4, "split")).train.size());
      }
    }
  }
}

TEST(Shards, ManifestRoundTripsAndIsStable) {
  GraphDataset d = binary_toy(60, 3);
  PartitionSpec spec;
  spec.scheme = PartitionScheme::kLda;
  spec.alpha = 0.5;
  spec.num_clients = 4;
  spec.seed = 7;
  const std::string a = manifest_to_json(make_shards(d, spec).manifest);
  const std::string b = manifest_to_json(make_shards(d, spec).manifest);
  EXPECT_EQ(a, b);
  EXPECT_EQ(manifest_to_json(manifest_from_json(a)), a);
  EXPECT_EQ(code_of([] { manifest_from_json("{"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { manifest_from_json("{\"seed\": 1}"); }), ErrorCode::kSchemaViolation);
}

// Golden assignment recorded from the first verified run.
TEST(Shards, LdaGoldenAssignment) {
  GraphDataset d = binary_toy(100, 17);
  PartitionSpec spec;
  spec.scheme = PartitionScheme::kLda;
  spec.alpha = 0.5;
  spec.num_clients = 4;
  spec.seed = 7;
  const std::string got = manifest_to_json(make_shards(d, spec).manifest);
  std::ifstream in(std::string(FEDGRAPH_TEST_DATA_DIR) + "/golden/lda_alpha0.5_clients4_seed7.json");
  ASSERT_TRUE(in.good()) << "golden file missing";
  std::stringstream expected;
  expected << in.rdbuf();
  EXPECT_EQ(got, expected.str());
}

GraphDataset link_toy() {
  GraphDataset d;
  d.task = TaskType::kLinkRegression;
  d.node_feature_dim = 1;
  GraphInput in;
  in.num_nodes = 4;
  in.edges = {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {0, 1}};
  in.node_features = DenseMatrix(4, 1, 1.0);
  in.edge_labels = {{0, 2, 5.0}, {0, 3, 1.0}, {1, 2, 2.0}, {1, 3, 4.0}};
  in.node_categories = std::vector<int>{-1, -1, 0, 1};
  d.graphs.push_back(build_graph(in));
  return d;
}

TEST(SelectUnits, HeldOutRatingsLeaveTheStructure) {
  GraphDataset d = link_toy();
  std::vector<std::size_t> train{0, 3};
  std::vector<std::size_t> val{1};
  GraphDataset t = select_units(d, train, train);
  GraphDataset v = select_units(d, val, train);
  ASSERT_EQ(t.graphs.size(), 1u);
  EXPECT_EQ(t.graphs[0].edge_labels().size(), 2u);
  EXPECT_TRUE(t.graphs[0].has_edge(0, 2));
  EXPECT_TRUE(t.graphs[0].has_edge(1, 3));
  EXPECT_TRUE(t.graphs[0].has_edge(0, 1));  // unlabeled edge stays
  EXPECT_FALSE(t.graphs[0].has_edge(0, 3));
  EXPECT_FALSE(t.graphs[0].has_edge(1, 2));
  EXPECT_FALSE(v.graphs[0].has_edge(0, 3));
  EXPECT_EQ(v.graphs[0].edge_labels()[0].value, 1.0);
}

TEST(UnitCategories, LinkUsesItemCategory) {
  GraphDataset d = link_toy();
  auto cats = unit_categories(d);
  ASSERT_EQ(cats.size(), 4u);
  EXPECT_EQ(cats[0], 0);
  EXPECT_EQ(cats[1], 1);
  Assignment a = metadata_partition(cats, 2, 0);
  EXPECT_EQ(a[0].size() + a[1].size(), 4u);
}

TEST(PartitionSpec, Validation) {
  PartitionSpec spec;
  spec.scheme = PartitionScheme::kLda;
  spec.alpha = 0.0;
  EXPECT_EQ(code_of([&] { spec.validate(); }), ErrorCode::kInvalidAlpha);
  EXPECT_EQ(parse_scheme("metadata"), PartitionScheme::kMetadata);
  EXPECT_EQ(code_of([] { parse_scheme("random"); }), ErrorCode::kInvalidConfig);
}

}  // namespace
}  // namespace fedgraph
