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
#include <string_view>
#include <vector>

#include "fedgraph/gnn/model.hpp"
#include "fedgraph/gnn/optimizer.hpp"
#include "fedgraph/gnn/params.hpp"
#include "fedgraph/graph/dataset.hpp"

namespace fedgraph {

enum class ServerAlgorithm { kFedAvg, kFedOpt };
std::string_view server_algorithm_name(ServerAlgorithm a);
ServerAlgorithm parse_server_algorithm(std::string_view name);

enum class EvalMetric { kAccuracy, kRocAuc, kMicroF1, kRmse, kMae, kMse };
std::string_view metric_name(EvalMetric m);
EvalMetric parse_metric(std::string_view name);
bool higher_is_better(EvalMetric m);
// ROC-AUC for graph classification, micro-F1 for nodes, RMSE otherwise.
EvalMetric default_metric(TaskType task);

struct FedOptConfig {
  double server_lr = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double tau = 1e-3;
  // false: plain step new = global - server_lr * delta.
  bool adaptive = true;
};

enum class DropStage { kBeforeUpload, kBeforeAggregateShare };

// Client `client` stops responding in `round` at `stage`. In plain runs
// both stages mean the update never arrives.
struct DropoutEvent {
  std::size_t round = 1;
  std::size_t client = 0;
  DropStage stage = DropStage::kBeforeUpload;
};

struct FLConfig {
  std::size_t num_clients = 1;        // K
  std::size_t clients_per_round = 0;  // 0 means K
  std::size_t rounds = 10;            // numbered 1..rounds
  std::size_t local_epochs = 1;
  OptimizerConfig optimizer;
  ServerAlgorithm server = ServerAlgorithm::kFedAvg;
  FedOptConfig fedopt;
  std::size_t eval_frequency = 5;
  std::uint64_t seed = 0;
  std::optional<EvalMetric> metric;
  std::vector<DropoutEvent> dropouts;
  std::size_t round_timeout_ms = 120000;

  std::size_t participants() const { return clients_per_round == 0 ? num_clients : clients_per_round; }
  bool is_eval_round(std::size_t round) const {
    return round == rounds || (eval_frequency > 0 && round % eval_frequency == 0);
  }
  // Throws InvalidConfig naming the offending key.
  void validate() const;
};

struct ClientUpdate {
  std::size_t client_id = 0;
  ParamVector params;
  std::uint64_t num_samples = 0;
  double train_loss = 0.0;
};

// E passes over the shard's training units, each in a freshly shuffled
// order, one optimizer step per unit with a fresh optimizer. The returned
// loss is the mean over all steps. Throws EmptyShard, LayoutMismatch.
ClientUpdate local_train(const GnnModel& model, const ParamVector& global, const ClientShard& shard,
                         std::size_t epochs, const OptimizerConfig& optimizer, std::uint64_t seed);

// Seed of client k's local run in round r.
std::uint64_t train_seed(std::uint64_t seed, std::size_t round, std::size_t client);

// Sum of (N_k / N) params_k in ascending client_id order. Throws
// EmptyUpdateSet, LayoutMismatch, InvalidCount (zero samples).
ParamVector aggregate_fedavg(std::span<const ClientUpdate> updates);

struct FedOptState {
  std::vector<double> m;
  std::vector<double> v;
  long steps = 0;
};

// delta = global - aggregate, then an Adam-style (or plain) server step.
ParamVector fedopt_apply(FedOptState& state, const ParamVector& global, const ParamVector& aggregate,
                         const FedOptConfig& config);
ParamVector fedopt_server_step(FedOptState& state, const ParamVector& global,
                               std::span<const ClientUpdate> updates, const FedOptConfig& config);

// m of K ids, uniform without replacement, ascending. Throws InvalidCount.
std::vector<std::size_t> sample_clients(std::size_t k, std::size_t m, std::size_t round,
                                        std::uint64_t seed);

}  // namespace fedgraph
