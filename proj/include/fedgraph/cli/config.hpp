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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedgraph/fl/engine.hpp"
#include "fedgraph/fl/runner.hpp"
#include "fedgraph/gnn/model.hpp"
#include "fedgraph/graph/dataset.hpp"
#include "fedgraph/io/dataset_io.hpp"
#include "fedgraph/io/synthetic.hpp"
#include "fedgraph/partition/partition.hpp"
#include "json.hpp"

namespace fedgraph {

using ordered_json = nlohmann::ordered_json;

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kMotifGraph;
  std::uint64_t seed = 0;
  SbmParams sbm;
  MotifParams motif;
  BipartiteParams bipartite;
};

// Node-level setting: the single loaded graph is replaced by ego networks.
struct EgoSpec {
  std::size_t count = 1000;
  std::size_t hops = 2;
  std::uint64_t seed = 0;
};

struct DataSpec {
  std::optional<std::string> path;  // as written; relative to the config file
  DatasetFormat format = DatasetFormat::kJson;
  std::optional<SyntheticSpec> synthetic;
  std::optional<EgoSpec> egos;
};

// Sections: data, partition, model, fl, secure, output_dir. Every key is
// optional except that data needs exactly one of path / synthetic.
struct RunConfig {
  DataSpec data;
  PartitionSpec partition;
  ModelConfig model;
  std::optional<TaskType> model_task;  // checked against the data
  FLConfig fl;
  bool secure_enabled = false;
  SecureOptions secure;
  std::string output_dir = "out";
  std::filesystem::path base_dir;  // for relative paths

  std::filesystem::path data_path() const;
  std::filesystem::path output_path() const;
};

// Throws InvalidConfig naming the offending key (unknown keys included).
RunConfig parse_run_config(const ordered_json& doc, const std::filesystem::path& base_dir = {});

// Fully populated document that parses back to the same config.
ordered_json run_config_to_json(const RunConfig& config, bool with_output_dir = true);

// Reads a JSON file; ParseError on malformed text.
ordered_json read_json_file(const std::filesystem::path& path);

// "a.b.c" into the document. Without create, every segment must exist.
void set_config_value(ordered_json& doc, std::string_view dotted, ordered_json value,
                      bool create = false);
bool has_config_path(const ordered_json& doc, std::string_view dotted);

// "key=value"; the value is read as JSON when it parses, else as a string.
std::pair<std::string, ordered_json> parse_assignment(std::string_view text);

GraphDataset load_run_data(const RunConfig& config);

// Cross-section checks that need the data: model.task, fl.metric,
// data.egos, secure.threshold.
void check_run_consistency(const RunConfig& config, const GraphDataset& data);

// Shards for the federated run, or the single shard of the centralized
// baseline (uniform, one client, same seed and ratios).
Partitioned partition_for_run(const RunConfig& config, const GraphDataset& data, bool centralized);

}  // namespace fedgraph
