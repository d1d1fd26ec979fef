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

#include "fedgraph/fl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedgraph/common/error.hpp"
#include "fedgraph/common/rng.hpp"

namespace fedgraph {

std::string_view server_algorithm_name(ServerAlgorithm a) {
  return a == ServerAlgorithm::kFedAvg ? "fedavg" : "fedopt";
}

ServerAlgorithm parse_server_algorithm(std::string_view name) {
  if (name == "fedavg") return ServerAlgorithm::kFedAvg;
  if (name == "fedopt") return ServerAlgorithm::kFedOpt;
  fail(ErrorCode::kInvalidConfig, "fl.server: unknown algorithm '" + std::string(name) + "'");
}

std::string_view metric_name(EvalMetric m) {
  switch (m) {
    case EvalMetric::kAccuracy: return "accuracy";
    case EvalMetric::kRocAuc: return "roc_auc";
    case EvalMetric::kMicroF1: return "micro_f1";
    case EvalMetric::kRmse: return "rmse";
    case EvalMetric::kMae: return "mae";
    case EvalMetric::kMse: return "mse";
  }
  return "unknown";
}

EvalMetric parse_metric(std::string_view name) {
  for (EvalMetric m : {EvalMetric::kAccuracy, EvalMetric::kRocAuc, EvalMetric::kMicroF1,
                       EvalMetric::kRmse, EvalMetric::kMae, EvalMetric::kMse}) {
    if (metric_name(m) == name) return m;
  }
  fail(ErrorCode::kInvalidConfig, "fl.metric: unknown metric '" + std::string(name) + "'");
}

bool higher_is_better(EvalMetric m) {
  return m == EvalMetric::kAccuracy || m == EvalMetric::kRocAuc || m == EvalMetric::kMicroF1;
}

EvalMetric default_metric(TaskType task) {
  switch (task) {
    case TaskType::kGraphClassification: return EvalMetric::kRocAuc;
    case TaskType::kNodeClassification: return EvalMetric::kMicroF1;
    default: return EvalMetric::kRmse;
  }
}

void FLConfig::validate() const {
  auto bad = [](const std::string& key, const std::string& why) {
    fail(ErrorCode::kInvalidConfig, key + ": " + why);
  };
  if (num_clients < 1) bad("fl.num_clients", "must be >= 1");
  if (participants() > num_clients) bad("fl.clients_per_round", "must be <= fl.num_clients");
  if (rounds < 1) bad("fl.rounds", "must be >= 1");
  if (local_epochs < 1) bad("fl.local_epochs", "must be >= 1");
  if (!(optimizer.learning_rate >= 0.0) || !std::isfinite(optimizer.learning_rate)) {
    bad("fl.optimizer.learning_rate", "must be finite and >= 0");
  }
  if (!(fedopt.server_lr >= 0.0)) bad("fl.fedopt.server_lr", "must be >= 0");
  if (!(fedopt.beta1 >= 0.0 && fedopt.beta1 < 1.0)) bad("fl.fedopt.beta1", "must lie in [0, 1)");
  if (!(fedopt.beta2 >= 0.0 && fedopt.beta2 < 1.0)) bad("fl.fedopt.beta2", "must lie in [0, 1)");
  if (!(fedopt.tau > 0.0)) bad("fl.fedopt.tau", "must be > 0");
  if (round_timeout_ms < 1) bad("fl.round_timeout_ms", "must be >= 1");
  for (const DropoutEvent& d : dropouts) {
    if (d.round < 1 || d.round > rounds) bad("fl.dropouts.round", "outside 1..fl.rounds");
    if (d.client >= num_clients) bad("fl.dropouts.client", "outside 0..fl.num_clients-1");
  }
}

std::uint64_t train_seed(std::uint64_t seed, std::size_t round, std::size_t client) {
  return derive_seed(seed, "train", round, client);
}

ClientUpdate local_train(const GnnModel& model, const ParamVector& global, const ClientShard& shard,
                         std::size_t epochs, const OptimizerConfig& optimizer, std::uint64_t seed) {
  require_same_layout(global.layout(), model.layout());
  std::vector<TrainingUnit> units = enumerate_units(shard.train);
  require(!units.empty(), ErrorCode::kEmptyShard,
          "client " + std::to_string(shard.client_id) + " has no training units");
  ParamVector params = global;
  ParamVector grad;
  auto opt = make_optimizer(optimizer, params.size());
  Rng rng(seed);
  double total = 0.0;
  std::size_t steps = 0;
  for (std::size_t e = 0; e < epochs; ++e) {
    rng.shuffle(units);
    for (const TrainingUnit& u : units) {
      total += model.loss_and_gradient(params, shard.train.graphs[u.graph], u, &rng, &grad);
      opt->step(params.values(), grad.values());
      ++steps;
    }
  }
  ClientUpdate out;
  out.client_id = shard.client_id;
  out.params = std::move(params);
  out.num_samples = shard.num_train_samples;
  out.train_loss = total / static_cast<double>(steps);
  return out;
}

ParamVector aggregate_fedavg(std::span<const ClientUpdate> updates) {
  require(!updates.empty(), ErrorCode::kEmptyUpdateSet, "no client updates to aggregate");
  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });
  std::uint64_t total = 0;
  for (const ClientUpdate& u : updates) {
    require_same_layout(u.params.layout(), updates[0].params.layout());
    require(u.num_samples > 0, ErrorCode::kInvalidCount,
            "client " + std::to_string(u.client_id) + " reports zero samples");
    total += u.num_samples;
  }
  const double n = static_cast<double>(total);
  const ClientUpdate& first = updates[order[0]];
  ParamVector out(first.params.layout());
  auto acc = out.values();
  const double w0 = static_cast<double>(first.num_samples) / n;
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = w0 * first.params.values()[i];
  for (std::size_t k = 1; k < order.size(); ++k) {
    const ClientUpdate& u = updates[order[k]];
    const double w = static_cast<double>(u.num_samples) / n;
    auto p = u.params.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * p[i];
  }
  return out;
}

ParamVector fedopt_apply(FedOptState& state, const ParamVector& global, const ParamVector& aggregate,
                         const FedOptConfig& config) {
  require_same_layout(global.layout(), aggregate.layout());
  const std::size_t d = global.size();
  ParamVector out = global;
  auto g = global.values();
  auto a = aggregate.values();
  auto w = out.values();
  if (!config.adaptive) {
    for (std::size_t i = 0; i < d; ++i) w[i] = g[i] - config.server_lr * (g[i] - a[i]);
    return out;
  }
  if (state.m.size() != d) {
    state.m.assign(d, 0.0);
    state.v.assign(d, 0.0);
    state.steps = 0;
  }
  ++state.steps;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.steps));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.steps));
  for (std::size_t i = 0; i < d; ++i) {
    const double delta = g[i] - a[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * delta;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * delta * delta;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    w[i] = g[i] - config.server_lr * mhat / (std::sqrt(vhat) + config.tau);
  }
  return out;
}

ParamVector fedopt_server_step(FedOptState& state, const ParamVector& global,
                               std::span<const ClientUpdate> updates, const FedOptConfig& config) {
  return fedopt_apply(state, global, aggregate_fedavg(updates), config);
}

std::vector<std::size_t> sample_clients(std::size_t k, std::size_t m, std::size_t round,
                                        std::uint64_t seed) {
  require(m >= 1 && m <= k, ErrorCode::kInvalidCount,
          "cannot sample " + std::to_string(m) + " of " + std::to_string(k) + " clients");
  std::vector<std::size_t> ids(k);
  std::iota(ids.begin(), ids.end(), 0);
  if (m == k) return ids;
  Rng rng(derive_seed(seed, "sample", round));
  rng.shuffle(ids);
  ids.resize(m);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace fedgraph
