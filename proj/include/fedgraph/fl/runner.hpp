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

#include "fedgraph/comm/transport.hpp"
#include "fedgraph/fl/engine.hpp"
#include "fedgraph/fl/report.hpp"
#include "fedgraph/gnn/model.hpp"

namespace fedgraph {

// Secure aggregation settings; N is each round's participant count.
struct SecureOptions {
  std::size_t threshold = 3;
  int scale_bits = 24;
  std::int64_t clamp_bound = std::int64_t{1} << 40;

  // Throws InvalidConfig naming the secure.* key.
  void validate(std::size_t participants) const;
};

enum class TransportKind { kMemory, kTcp };

EvalMetric resolve_metric(const FLConfig& fl, TaskType task);

// Client k talks on endpoint id k + 1.
inline std::uint16_t endpoint_of(std::size_t client) { return static_cast<std::uint16_t>(client + 1); }

// Server worker: runs every round over the endpoint, then broadcasts
// Shutdown. On failure it broadcasts Abort and rethrows.
TrainingReport run_server(Endpoint& server, const GnnModel& model, const FLConfig& fl,
                          const std::optional<SecureOptions>& secure, TaskType task);

// Client worker: serves rounds until Shutdown or Abort. Local failures are
// reported to the server with Abort and rethrown.
void run_client(Endpoint& endpoint, const ClientShard& shard, const GnnModel& model,
                const FLConfig& fl, const std::optional<SecureOptions>& secure);

// One server and shards.size() client workers on threads of this process.
TrainingReport run_training(std::span<const ClientShard> shards, const ModelConfig& model_config,
                            const FLConfig& fl, TransportKind transport,
                            const std::optional<SecureOptions>& secure = std::nullopt);

// The single-shard run: round r is local_train on the shard from the
// current parameters with the seed client 0 would use in round r.
TrainingReport train_centralized(const ClientShard& shard, const ModelConfig& model_config,
                                 const FLConfig& fl);

GnnModel model_for(const ModelConfig& config, const GraphDataset& data);

}  // namespace fedgraph
