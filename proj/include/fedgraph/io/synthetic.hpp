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
#include <string_view>
#include <vector>

#include "fedgraph/graph/dataset.hpp"
#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

// Stochastic block model for node classification. Node labels are block
// ids; features are one-hot block ids plus Gaussian noise.
struct SbmParams {
  std::size_t num_nodes = 300;
  std::size_t num_blocks = 3;
  double p_in = 0.08;
  double p_out = 0.01;
  double feature_noise = 1.0;
};

// Graph classification over three motif families: cycle (label 0), star
// (1), path (2). Node features are one-hot degrees capped at
// max_degree_feature. Each graph optionally gains one random chord.
struct MotifParams {
  std::size_t num_graphs = 600;
  std::size_t min_nodes = 6;
  std::size_t max_nodes = 14;
  std::size_t max_degree_feature = 4;
  double chord_probability = 0.3;
};

// User-item rating graph. Users are nodes 0..U-1, items U..U+I-1.
// Ratings are clamp(round(3 + <a_u, b_i> + noise * N(0, 1)), 1, 5) from
// planted rank-2 factors. Item categories drive metadata partitioning.
struct BipartiteParams {
  std::size_t num_users = 60;
  std::size_t num_items = 40;
  std::size_t num_categories = 4;
  std::size_t ratings_per_user = 8;
  double noise = 0.3;
};

struct BipartiteData {
  GraphDataset dataset;
  DenseMatrix user_factors;  // U x 2
  DenseMatrix item_factors;  // I x 2
};

// All generators throw InvalidParams on inconsistent sizes.
GraphDataset gen_sbm_node(const SbmParams& params, std::uint64_t seed);
GraphDataset gen_motif_graph(const MotifParams& params, std::uint64_t seed);
BipartiteData gen_bipartite_rating(const BipartiteParams& params, std::uint64_t seed);

enum class SyntheticKind { kSbmNode, kMotifGraph, kBipartiteRating };

SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view synthetic_kind_name(SyntheticKind kind);

// Size-driven front door. size is nodes (sbm), graphs (motif) or users
// (bipartite); classes is blocks (sbm) or item categories (bipartite) and
// must be 3 for motif; 0 keeps the default.
GraphDataset gen_synthetic(SyntheticKind kind, std::size_t size, std::size_t classes,
                           std::uint64_t seed);

}  // namespace fedgraph
