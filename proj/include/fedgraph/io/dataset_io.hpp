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
#include <filesystem>
#include <string>
#include <string_view>

#include "fedgraph/graph/dataset.hpp"

namespace fedgraph {

// Canonical dataset document:
//   {format_version: 1, task, num_tasks_or_classes,
//    feature_dims: {node, edge}, class_names?,
//    graphs: [{num_nodes, edges: [[u, v]...], node_features: [[...]...],
//              edge_features?, node_labels?, graph_label?, edge_labels?,
//              category?, node_categories?}]}
// Edges are listed once per undirected pair. Missing graph_label entries
// are null. edge_labels rows are [src, dst, value].
std::string dataset_to_json(const GraphDataset& dataset);
// Throws ParseError on malformed JSON and SchemaViolation on anything that
// does not describe a valid dataset (including non-finite features).
GraphDataset dataset_from_json(std::string_view text);

void save_dataset(const GraphDataset& dataset, const std::filesystem::path& path);

enum class DatasetFormat { kJson, kPlanetoid };

DatasetFormat parse_dataset_format(std::string_view name);

struct LoadResult {
  GraphDataset dataset;
  std::size_t dropped_edges = 0;  // planetoid cites rows naming unknown ids
};

// json: a dataset document. planetoid: a directory holding one *.content
// and one *.cites file, or a path prefix P with P.content and P.cites.
LoadResult load_dataset(const std::filesystem::path& path, DatasetFormat format);

// Planetoid text: content rows "<id> <feature>... <label>", cites rows
// "<cited> <citing>". Labels map to class ids in first-seen order.
LoadResult parse_planetoid(std::string_view content, std::string_view cites);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace fedgraph
