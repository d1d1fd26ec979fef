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
#include <string>
#include <string_view>
#include <vector>

#include "fedgraph/graph/graph.hpp"

namespace fedgraph {

enum class TaskType { kGraphClassification, kGraphRegression, kNodeClassification, kLinkRegression };

std::string_view task_name(TaskType task);
TaskType parse_task(std::string_view name);

struct GraphDataset {
  TaskType task = TaskType::kGraphClassification;
  std::vector<Graph> graphs;
  // Label columns for graph tasks, classes for node classification, 1 for
  // link regression.
  std::size_t num_tasks_or_classes = 1;
  std::size_t node_feature_dim = 0;
  std::size_t edge_feature_dim = 0;
  // Optional class names (planetoid label strings in first-seen order).
  std::vector<std::string> class_names;

  // Same task and dimensions, no graphs.
  GraphDataset empty_like() const;
};

// Checks that every graph carries the labels its task requires and that
// class indices and feature widths agree with the header. Throws
// SchemaViolation.
void validate_dataset(const GraphDataset& dataset);

// One optimisation step's worth of data: a graph, or for link tasks a
// single labeled edge of a graph.
struct TrainingUnit {
  std::size_t graph = 0;
  std::size_t item = 0;

  friend bool operator==(const TrainingUnit&, const TrainingUnit&) = default;
};

// Units in canonical order: graphs in order; for link tasks, each graph's
// edge labels in order.
std::vector<TrainingUnit> enumerate_units(const GraphDataset& dataset);

struct ClientShard {
  std::size_t client_id = 0;
  GraphDataset train;
  GraphDataset val;
  GraphDataset test;
  std::size_t num_train_samples = 0;
};

}  // namespace fedgraph
