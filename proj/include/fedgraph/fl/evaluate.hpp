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

#include <span>

#include "fedgraph/fl/engine.hpp"
#include "fedgraph/gnn/model.hpp"
#include "fedgraph/graph/dataset.hpp"
#include "fedgraph/metrics/metrics.hpp"

namespace fedgraph {

// Throws InvalidConfig when the metric does not apply to the task.
void check_metric_for_task(EvalMetric metric, TaskType task);

// Scores every labeled unit of the dataset. An empty dataset, or an AUC
// with a single class present, yields support 0 and a NaN value.
EvalResult evaluate(const GnnModel& model, const ParamVector& params, const GraphDataset& data,
                    EvalMetric metric);

// Support-weighted mean over the results with support > 0; NaN when none.
EvalResult pool_results(std::span<const EvalResult> parts);

}  // namespace fedgraph
