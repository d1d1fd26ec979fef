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

#include "fedgraph/graph/dataset.hpp"

#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

std::string_view task_name(TaskType task) {
  switch (task) {
    case TaskType::kGraphClassification: return "graph_classification";
    case TaskType::kGraphRegression: return "graph_regression";
    case TaskType::kNodeClassification: return "node_classification";
    case TaskType::kLinkRegression: return "link_regression";
  }
  return "unknown";
}

TaskType parse_task(std::string_view name) {
  for (TaskType t : {TaskType::kGraphClassification, TaskType::kGraphRegression,
                     TaskType::kNodeClassification, TaskType::kLinkRegression}) {
    if (task_name(t) == name) return t;
  }
  fail(ErrorCode::kSchemaViolation, "unknown task '" + std::string(name) + "'");
}

GraphDataset GraphDataset::empty_like() const {
  GraphDataset d;
  d.task = task;
  d.num_tasks_or_classes = num_tasks_or_classes;
  d.node_feature_dim = node_feature_dim;
  d.edge_feature_dim = edge_feature_dim;
  d.class_names = class_names;
  return d;
}

void validate_dataset(const GraphDataset& dataset) {
  require(dataset.num_tasks_or_classes > 0, ErrorCode::kSchemaViolation,
          "num_tasks_or_classes must be positive");
  for (std::size_t gi = 0; gi < dataset.graphs.size(); ++gi) {
    const Graph& g = dataset.graphs[gi];
    const std::string where = "graph " + std::to_string(gi) + ": ";
    require(g.feature_dim() == dataset.node_feature_dim, ErrorCode::kSchemaViolation,
            where + "node feature width " + std::to_string(g.feature_dim()) + " != " +
                std::to_string(dataset.node_feature_dim));
    require(g.node_features().all_finite(), ErrorCode::kSchemaViolation,
            where + "non-finite node feature");
    switch (dataset.task) {
      case TaskType::kGraphClassification:
      case TaskType::kGraphRegression: {
        require(g.graph_label().has_value(), ErrorCode::kSchemaViolation,
                where + "missing graph_label");
        const auto& y = *g.graph_label();
        require(y.size() == dataset.num_tasks_or_classes, ErrorCode::kSchemaViolation,
                where + "graph_label length mismatch");
        for (double v : y) {
          if (std::isnan(v)) continue;
          require(std::isfinite(v), ErrorCode::kSchemaViolation, where + "infinite label");
          if (dataset.task == TaskType::kGraphClassification) {
            require(v == 0.0 || v == 1.0, ErrorCode::kSchemaViolation,
                    where + "classification labels must be 0, 1 or NaN");
          }
        }
        break;
      }
      case TaskType::kNodeClassification: {
        require(g.node_labels().has_value(), ErrorCode::kSchemaViolation,
                where + "missing node_labels");
        for (int c : *g.node_labels()) {
          require(c >= -1 && c < static_cast<int>(dataset.num_tasks_or_classes),
                  ErrorCode::kSchemaViolation, where + "class index " + std::to_string(c));
        }
        break;
      }
      case TaskType::kLinkRegression:
        break;
    }
  }
}

std::vector<TrainingUnit> enumerate_units(const GraphDataset& dataset) {
  std::vector<TrainingUnit> units;
  for (std::size_t g = 0; g < dataset.graphs.size(); ++g) {
    if (dataset.task == TaskType::kLinkRegression) {
      for (std::size_t e = 0; e < dataset.graphs[g].edge_labels().size(); ++e)
        units.push_back({g, e});
    } else {
      units.push_back({g, 0});
    }
  }
  return units;
}

}  // namespace fedgraph
