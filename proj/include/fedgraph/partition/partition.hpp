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
#include <string_view>
#include <vector>

#include "fedgraph/graph/dataset.hpp"

namespace fedgraph {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  // Throws InvalidParams unless each ratio is in [0, 1] and they sum to 1.
  void validate() const;
};

// Positions into some list of samples, each part sorted ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  friend bool operator==(const SplitIndices&, const SplitIndices&) = default;
};

// Shuffles 0..n-1 and cuts it: val and test get floor(n * ratio), train the
// rest. Throws EmptyDataset when n == 0.
SplitIndices split_indices(std::size_t n, const SplitRatios& ratios, std::uint64_t seed);

struct DatasetSplit {
  GraphDataset train;
  GraphDataset val;
  GraphDataset test;
  SplitIndices indices;  // unit indices in enumerate_units order
};

DatasetSplit split_train_val_test(const GraphDataset& dataset, const SplitRatios& ratios,
                                  std::uint64_t seed);

// assignment[j] lists the samples owned by client j, ascending.
using Assignment = std::vector<std::vector<std::size_t>>;

// Dirichlet label skew. Per class (ascending label order) the shuffled
// class members are cut at round(n_k * cumulative p_k). Afterwards every
// empty client takes one sample from the currently largest client.
// Throws InvalidAlpha, InvalidCount, MoreClientsThanSamples.
Assignment lda_partition(std::span<const int> labels, std::size_t num_clients, double alpha,
                         std::uint64_t seed);

// Shuffled round-robin. Throws InvalidCount, MoreClientsThanSamples.
Assignment uniform_partition(std::size_t n, std::size_t num_clients, std::uint64_t seed);

// Whole categories dealt round-robin, largest first (ties in seeded
// order). Clients may end up empty. Throws MissingCategory, InvalidCount.
Assignment metadata_partition(std::span<const std::optional<int>> categories,
                              std::size_t num_clients, std::uint64_t seed);

// num_egos distinct centers drawn uniformly from the single graph of a
// node-classification dataset; each sample is the k-hop ego network with
// only its center labeled. Throws TooManyEgos, SchemaViolation.
GraphDataset sample_ego_networks(const GraphDataset& global, std::size_t num_egos, std::size_t k,
                                 std::uint64_t seed);

// Label used for label-skew partitioning, one per training unit. Graph
// classification: the positive flag (one task) or argmax task; node
// classification: the majority labeled class; otherwise 0.
std::vector<int> unit_classes(const GraphDataset& dataset);

// Category per unit: graph category, or for link tasks the category of the
// label's destination node.
std::vector<std::optional<int>> unit_categories(const GraphDataset& dataset);

// Dataset restricted to the given units (enumerate_units indices). For link
// tasks the message-passing structure keeps unlabeled edges plus the edges
// of structure_units; every other labeled edge is removed so held-out
// ratings never leak into aggregation. Ignored for other tasks.
GraphDataset select_units(const GraphDataset& dataset, std::span<const std::size_t> label_units,
                          std::span<const std::size_t> structure_units);

enum class PartitionScheme { kLda, kUniform, kMetadata };

std::string_view scheme_name(PartitionScheme scheme);
PartitionScheme parse_scheme(std::string_view name);

struct PartitionSpec {
  PartitionScheme scheme = PartitionScheme::kUniform;
  double alpha = 0.5;
  std::size_t num_clients = 1;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  // Split before assigning clients; each split is then partitioned alone.
  bool global_split = false;

  void validate() const;
};

struct ShardManifest {
  std::uint64_t seed = 0;
  PartitionScheme scheme = PartitionScheme::kUniform;
  std::optional<double> alpha;
  std::size_t num_clients = 0;
  bool global_split = false;
  Assignment assignments;             // unit indices per client
  std::vector<SplitIndices> splits;   // unit indices per client

  friend bool operator==(const ShardManifest&, const ShardManifest&) = default;
};

struct Partitioned {
  std::vector<ClientShard> shards;
  ShardManifest manifest;
};

Partitioned make_shards(const GraphDataset& dataset, const PartitionSpec& spec);

std::string manifest_to_json(const ShardManifest& manifest);
ShardManifest manifest_from_json(std::string_view text);

// counts[j][c] = samples of class c on client j.
std::vector<std::vector<std::size_t>> class_histogram(std::span<const int> classes,
                                                      const Assignment& assignment);

}  // namespace fedgraph
