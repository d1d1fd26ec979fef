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
#include <string>
#include <vector>

#include "fedgraph/gnn/params.hpp"
#include "json.hpp"

namespace fedgraph {

struct RoundRecord {
  std::size_t round = 0;
  std::size_t participants = 0;  // updates that reached the aggregate
  double mean_train_loss = 0.0;  // sample-weighted over those updates
  std::optional<double> val_metric;
  std::optional<double> test_metric;
};

struct TrainingReport {
  std::string mode;  // "federated" or "centralized"
  bool secure = false;
  std::string metric;
  std::vector<RoundRecord> rounds;
  std::optional<double> final_val_metric;
  std::optional<double> final_test_metric;
  std::optional<std::size_t> best_val_round;
  std::optional<double> best_val_test_metric;
  std::size_t param_count = 0;
  std::uint64_t seed = 0;
  ParamVector final_params;
  // Wall-clock, kept apart from the deterministic fields.
  std::vector<double> round_wall_ms;
  double total_wall_ms = 0.0;
};

// Fills final_* and best_val_* from the evaluated rounds.
void finalize_report(TrainingReport& report, bool higher_better);

// Deterministic fields only; config is echoed verbatim when given.
std::string report_to_json(const TrainingReport& report,
                           const nlohmann::ordered_json* config = nullptr);
// round,participants,mean_train_loss,val_metric,test_metric
std::string report_to_csv(const TrainingReport& report);
std::string timing_to_json(const TrainingReport& report);

std::string format_double(double v);

}  // namespace fedgraph
