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

#include "fedgraph/fl/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fedgraph/comm/payloads.hpp"
#include "fedgraph/comm/tcp.hpp"
#include "fedgraph/common/error.hpp"
#include "fedgraph/common/log.hpp"
#include "fedgraph/common/rng.hpp"
#include "fedgraph/fl/evaluate.hpp"
#include "fedgraph/fl/protocol.hpp"
#include "fedgraph/secure/secure_agg.hpp"

namespace fedgraph {
namespace {

using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SAConfig round_sa_config(const SecureOptions& s, const FLConfig& fl, std::size_t participants) {
  SAConfig c;
  c.num_clients = participants;
  c.threshold = s.threshold;
  c.scale_bits = s.scale_bits;
  c.clamp_bound = s.clamp_bound;
  c.seed = derive_seed(fl.seed, "secure");
  return c;
}

std::optional<DropStage> scheduled_drop(const FLConfig& fl, std::size_t round, std::size_t client) {
  for (const DropoutEvent& d : fl.dropouts) {
    if (d.round == round && d.client == client) return d.stage;
  }
  return std::nullopt;
}

bool is_control(const RoundMessage& m, ControlKind kind) {
  return m.type == MessageType::kControl && decode_control(m.payload).kind == kind;
}

std::vector<std::uint16_t> to_ids(const std::vector<std::size_t>& clients) {
  std::vector<std::uint16_t> out;
  for (std::size_t c : clients) out.push_back(endpoint_of(c));
  return out;
}

// Server-side message intake for one round. Messages from this round that
// the current phase does not want are kept for later phases.
class Collector {
 public:
  Collector(Endpoint& ep, std::uint32_t round, Clock::time_point deadline)
      : ep_(ep), round_(round), deadline_(deadline) {}

  // One message per expected sender satisfying `wanted`, or a Dropout
  // control. Missing senders at the deadline count as dropped.
  std::map<std::uint16_t, RoundMessage> gather(const std::set<std::uint16_t>& from,
                                               const std::function<bool(const RoundMessage&)>& wanted) {
    std::map<std::uint16_t, RoundMessage> got;
    auto take = [&](RoundMessage& m) -> bool {
      if (!from.count(m.sender) || got.count(m.sender)) return false;
      if (is_control(m, ControlKind::kAbort)) {
        fail(ErrorCode::kTransportFailure, "client " + std::to_string(m.sender - 1) + " aborted");
      }
      if (!wanted(m) && !is_control(m, ControlKind::kDropout)) return false;
      got.emplace(m.sender, std::move(m));
      return true;
    };
    for (auto it = backlog_.begin(); it != backlog_.end();) {
      if (take(*it)) {
        it = backlog_.erase(it);
      } else {
        ++it;
      }
    }
    while (got.size() < from.size()) {
      const auto left = std::chrono::duration_cast<milliseconds>(deadline_ - Clock::now());
      RoundMessage m;
      try {
        m = ep_.recv(std::max(left, milliseconds(0)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTimeout) throw;
        logger().warn("round {}: {} of {} clients silent, treating as dropped", round_,
                      from.size() - got.size(), from.size());
        break;
      }
      if (m.round != round_) {
        if (is_control(m, ControlKind::kAbort)) {
          fail(ErrorCode::kTransportFailure, "client " + std::to_string(m.sender - 1) + " aborted");
        }
        logger().warn("discarding {} from round {} during round {}", message_type_name(m.type),
                      m.round, round_);
        continue;
      }
      if (!take(m)) backlog_.push_back(std::move(m));
    }
    for (auto it = got.begin(); it != got.end();) {
      if (is_control(it->second, ControlKind::kDropout)) {
        it = got.erase(it);
      } else {
        ++it;
      }
    }
    return got;
  }

 private:
  Endpoint& ep_;
  std::uint32_t round_;
  Clock::time_point deadline_;
  std::deque<RoundMessage> backlog_;
};

struct RoundOutcome {
  std::optional<ParamVector> aggregate;
  std::size_t participants = 0;
  double mean_loss = std::nan("");
};

double weighted_loss(const std::vector<std::pair<std::uint64_t, double>>& parts) {
  std::uint64_t total = 0;
  for (const auto& [n, l] : parts) total += n;
  if (total == 0) return std::nan("");
  double acc = 0.0;
  for (const auto& [n, l] : parts) acc += static_cast<double>(n) / static_cast<double>(total) * l;
  return acc;
}

RoundOutcome plain_round(Collector& in, const std::vector<std::size_t>& selected,
                         const ParamLayout& layout) {
  std::set<std::uint16_t> from;
  for (std::size_t c : selected) from.insert(endpoint_of(c));
  auto got = in.gather(from, [](const RoundMessage& m) { return m.type == MessageType::kClientUpdate; });
  std::vector<ClientUpdate> updates;
  std::vector<std::pair<std::uint64_t, double>> losses;
  for (auto& [id, m] : got) {
    ClientUpdate u = decode_update(m.payload, layout);
    u.client_id = id - 1;
    losses.emplace_back(u.num_samples, u.train_loss);
    updates.push_back(std::move(u));
  }
  RoundOutcome out;
  out.participants = updates.size();
  out.mean_loss = weighted_loss(losses);
  if (!updates.empty()) out.aggregate = aggregate_fedavg(updates);
  return out;
}

RoundOutcome secure_round(Endpoint& ep, Collector& in, const std::vector<std::size_t>& selected,
                          const ParamLayout& layout, const SAConfig& cfg, std::uint32_t round) {
  std::map<std::uint16_t, std::size_t> position;
  std::set<std::uint16_t> from;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    position[endpoint_of(selected[i])] = i;
    from.insert(endpoint_of(selected[i]));
  }
  SecAggServer server(cfg, layout.total_size());
  auto uploads = in.gather(from, [](const RoundMessage& m) { return m.type == MessageType::kMaskedUpload; });
  std::vector<std::pair<std::uint64_t, double>> losses;
  for (auto& [id, m] : uploads) {
    MaskedUploadBody b = decode_masked_upload(m.payload);
    losses.emplace_back(b.num_samples, b.train_loss);
    server.receive_upload(position.at(id), std::move(b.values), b.num_samples);
  }
  const std::vector<std::size_t> u1 = server.upload_survivors();
  require(u1.size() >= cfg.threshold, ErrorCode::kInsufficientSurvivors,
          "round " + std::to_string(round) + ": " + std::to_string(u1.size()) +
              " uploads, threshold " + std::to_string(cfg.threshold));
  std::vector<std::uint16_t> u1_ids(u1.begin(), u1.end());
  std::set<std::uint16_t> share_from;
  for (std::size_t p : u1) {
    const std::uint16_t id = endpoint_of(selected[p]);
    share_from.insert(id);
    ep.send(control_message(ControlKind::kSurvivorList, round, id, u1_ids));
  }
  auto shares = in.gather(share_from, [](const RoundMessage& m) { return m.type == MessageType::kAggShare; });
  for (auto& [id, m] : shares) {
    ShareBody b = decode_share(m.payload);
    server.receive_aggregate_share(position.at(id), ShareVector{b.x, std::move(b.values)});
  }
  RoundOutcome out;
  out.participants = u1.size();
  out.mean_loss = weighted_loss(losses);
  out.aggregate = ParamVector(layout, server.finish());
  return out;
}

void evaluate_round(Endpoint& ep, Collector& in, const ParamVector& global,
                    std::size_t num_clients, std::uint32_t round, const std::string& metric,
                    RoundRecord& record) {
  std::vector<std::size_t> all(num_clients);
  for (std::size_t k = 0; k < num_clients; ++k) all[k] = k;
  RoundMessage msg;
  msg.type = MessageType::kGlobalModel;
  msg.round = round;
  msg.payload = encode_global({GlobalMode::kEvaluate, to_ids(all), global});
  ep.broadcast(std::move(msg));
  std::set<std::uint16_t> from;
  for (std::size_t k : all) from.insert(endpoint_of(k));
  auto got = in.gather(from, [](const RoundMessage& m) { return m.type == MessageType::kEvalReport; });
  std::vector<EvalResult> val, test;
  for (auto& [id, m] : got) {
    EvalReportBody b = decode_eval(m.payload, metric);
    val.push_back(b.val);
    test.push_back(b.test);
  }
  const EvalResult v = pool_results(val);
  const EvalResult t = pool_results(test);
  record.val_metric = v.value;
  record.test_metric = t.value;
}

void broadcast_quietly(Endpoint& ep, ControlKind kind, std::uint32_t round) {
  try {
    ep.broadcast(control_message(kind, round, kBroadcastId));
  } catch (const Error& e) {
    logger().warn("could not broadcast control {}: {}", static_cast<int>(kind), e.what());
  }
}

}  // namespace

void SecureOptions::validate(std::size_t participants) const {
  require(threshold >= 1 && threshold <= participants, ErrorCode::kInvalidConfig,
          "secure.threshold: must lie in [1, " + std::to_string(participants) + "]");
  require(scale_bits >= 0 && scale_bits <= 52, ErrorCode::kInvalidConfig,
          "secure.scale_bits: must lie in [0, 52]");
  require(clamp_bound > 0, ErrorCode::kInvalidConfig, "secure.clamp_bound: must be > 0");
  SAConfig c;
  c.num_clients = participants;
  c.threshold = threshold;
  c.scale_bits = scale_bits;
  c.clamp_bound = clamp_bound;
  c.validate();
}

EvalMetric resolve_metric(const FLConfig& fl, TaskType task) {
  const EvalMetric m = fl.metric.value_or(default_metric(task));
  check_metric_for_task(m, task);
  return m;
}

GnnModel model_for(const ModelConfig& config, const GraphDataset& data) {
  ModelConfig c = config;
  c.task = data.task;
  c.validate();
  return GnnModel(c, data.node_feature_dim, output_count(data));
}

TrainingReport run_server(Endpoint& ep, const GnnModel& model, const FLConfig& fl,
                          const std::optional<SecureOptions>& secure, TaskType task) {
  fl.validate();
  if (secure) secure->validate(fl.participants());
  const EvalMetric metric = resolve_metric(fl, task);
  TrainingReport report;
  report.mode = "federated";
  report.secure = secure.has_value();
  report.metric = std::string(metric_name(metric));
  report.seed = fl.seed;
  report.param_count = model.layout().total_size();
  const auto run_start = Clock::now();
  ParamVector global = model.initial_params(derive_seed(fl.seed, "init"));
  FedOptState opt_state;
  std::uint32_t round = 0;
  try {
    for (std::size_t r = 1; r <= fl.rounds; ++r) {
      round = static_cast<std::uint32_t>(r);
      const auto start = Clock::now();
      Collector in(ep, round, start + milliseconds(fl.round_timeout_ms));
      const std::vector<std::size_t> selected =
          sample_clients(fl.num_clients, fl.participants(), r, fl.seed);
      RoundMessage msg;
      msg.type = MessageType::kGlobalModel;
      msg.round = round;
      msg.payload = encode_global({GlobalMode::kTrain, to_ids(selected), global});
      ep.broadcast(std::move(msg));

      RoundOutcome outcome =
          secure ? secure_round(ep, in, selected, model.layout(),
                                round_sa_config(*secure, fl, selected.size()), round)
                 : plain_round(in, selected, model.layout());
      if (outcome.aggregate) {
        global = fl.server == ServerAlgorithm::kFedAvg
                     ? std::move(*outcome.aggregate)
                     : fedopt_apply(opt_state, global, *outcome.aggregate, fl.fedopt);
      } else {
        logger().warn("round {}: no updates arrived, global model unchanged", r);
      }
      RoundRecord rec;
      rec.round = r;
      rec.participants = outcome.participants;
      rec.mean_train_loss = outcome.mean_loss;
      if (fl.is_eval_round(r)) {
        evaluate_round(ep, in, global, fl.num_clients, round, report.metric, rec);
      }
      report.rounds.push_back(rec);
      report.round_wall_ms.push_back(elapsed_ms(start));
    }
  } catch (...) {
    broadcast_quietly(ep, ControlKind::kAbort, round);
    throw;
  }
  broadcast_quietly(ep, ControlKind::kShutdown, round);
  report.final_params = std::move(global);
  report.total_wall_ms = elapsed_ms(run_start);
  finalize_report(report, higher_is_better(metric));
  return report;
}

namespace {

class ClientWorker {
 public:
  ClientWorker(Endpoint& ep, const ClientShard& shard, const GnnModel& model, const FLConfig& fl,
               const std::optional<SecureOptions>& secure)
      : ep_(ep), shard_(shard), model_(model), fl_(fl), secure_(secure),
        metric_(resolve_metric(fl, shard.train.task)),
        wait_(milliseconds(fl.round_timeout_ms * 10)) {}

  void serve() {
    while (true) {
      RoundMessage m = next();
      if (m.type == MessageType::kControl) {
        const ControlKind kind = decode_control(m.payload).kind;
        if (kind == ControlKind::kShutdown || kind == ControlKind::kAbort) return;
        continue;
      }
      if (m.type == MessageType::kMaskShare) {
        // A peer's relayed share can overtake the broadcast that opens a round.
        early_.push_back(std::move(m));
        continue;
      }
      if (m.type != MessageType::kGlobalModel) continue;  // stale round traffic
      GlobalModelBody body = decode_global(m.payload, model_.layout());
      const bool asked = std::find(body.clients.begin(), body.clients.end(), ep_.id()) != body.clients.end();
      if (!asked) continue;
      if (body.mode == GlobalMode::kEvaluate) {
        evaluate(m.round, body.params);
      } else if (secure_) {
        if (!secure_round(m.round, body)) return;
      } else {
        plain_round(m.round, body.params);
      }
    }
  }

 private:
  RoundMessage next() {
    if (!pending_.empty()) {
      RoundMessage m = std::move(pending_.front());
      pending_.pop_front();
      return m;
    }
    return ep_.recv(wait_);
  }

  void send(MessageType type, std::uint32_t round, Bytes payload) {
    RoundMessage m;
    m.type = type;
    m.round = round;
    m.receiver = kServerId;
    m.payload = std::move(payload);
    ep_.send(std::move(m));
  }

  ClientUpdate train(std::uint32_t round, const ParamVector& global) {
    return local_train(model_, global, shard_, fl_.local_epochs, fl_.optimizer,
                       train_seed(fl_.seed, round, shard_.client_id));
  }

  void plain_round(std::uint32_t round, const ParamVector& global) {
    if (scheduled_drop(fl_, round, shard_.client_id)) {
      ep_.send(control_message(ControlKind::kDropout, round, kServerId));
      return;
    }
    send(MessageType::kClientUpdate, round, encode_update(train(round, global)));
  }

  // false when the server ended the run mid-round.
  bool secure_round(std::uint32_t round, const GlobalModelBody& body) {
    std::map<std::uint16_t, std::size_t> position;
    for (std::size_t i = 0; i < body.clients.size(); ++i) position[body.clients[i]] = i;
    const std::size_t me = position.at(ep_.id());
    const SAConfig cfg = round_sa_config(*secure_, fl_, body.clients.size());
    const std::size_t dim = model_.layout().total_size();
    SecAggClient sa(cfg, me, round, dim);

    std::vector<ShareVector> shares = sa.mask_shares();
    for (std::size_t j = 0; j < shares.size(); ++j) {
      if (j == me) continue;
      RoundMessage m;
      m.type = MessageType::kMaskShare;
      m.round = round;
      m.receiver = body.clients[j];
      m.payload = encode_share({shares[j].x, shares[j].values});
      ep_.send(std::move(m));
    }
    sa.receive_share(me, shares[me]);

    const auto drop = scheduled_drop(fl_, round, shard_.client_id);
    if (drop == DropStage::kBeforeUpload) {
      ep_.send(control_message(ControlKind::kDropout, round, kServerId));
      return true;
    }
    const ClientUpdate update = train(round, body.params);
    QuantizeStats stats;
    MaskedUploadBody up;
    up.num_samples = update.num_samples;
    up.train_loss = update.train_loss;
    up.values = sa.masked_upload(update.params.values(), update.num_samples, &stats);
    if (stats.clamped > 0) {
      logger().warn("client {} round {}: {} coordinates clamped", shard_.client_id, round, stats.clamped);
    }
    send(MessageType::kMaskedUpload, round, encode_masked_upload(up));

    std::set<std::size_t> have = {me};
    std::optional<std::vector<std::size_t>> u1;
    for (const RoundMessage& m : early_) {
      if (m.round == round && position.count(m.sender) && m.sender != ep_.id()) {
        const ShareBody b = decode_share(m.payload);
        sa.receive_share(position.at(m.sender), ShareVector{b.x, b.values});
        have.insert(position.at(m.sender));
      }
    }
    std::erase_if(early_, [&](const RoundMessage& m) { return m.round <= round; });
    auto ready = [&] {
      if (!u1) return false;
      return std::all_of(u1->begin(), u1->end(), [&](std::size_t p) { return have.count(p) > 0; });
    };
    while (!ready()) {
      RoundMessage m = ep_.recv(wait_);
      if (m.type == MessageType::kMaskShare && m.round == round && position.count(m.sender)) {
        const ShareBody b = decode_share(m.payload);
        sa.receive_share(position.at(m.sender), ShareVector{b.x, b.values});
        have.insert(position.at(m.sender));
      } else if (m.type == MessageType::kControl && m.round == round &&
                 decode_control(m.payload).kind == ControlKind::kSurvivorList) {
        const ControlBody c = decode_control(m.payload);
        u1.emplace(c.ids.begin(), c.ids.end());
      } else if (m.type == MessageType::kControl) {
        const ControlKind kind = decode_control(m.payload).kind;
        if (kind == ControlKind::kAbort || kind == ControlKind::kShutdown) return false;
      } else if (m.type == MessageType::kGlobalModel) {
        pending_.push_back(std::move(m));  // server moved on without us
        return true;
      }
    }
    if (drop == DropStage::kBeforeAggregateShare) {
      ep_.send(control_message(ControlKind::kDropout, round, kServerId));
      return true;
    }
    const ShareVector agg = sa.aggregate_share(*u1);
    send(MessageType::kAggShare, round, encode_share({agg.x, agg.values}));
    return true;
  }

  void evaluate(std::uint32_t round, const ParamVector& params) {
    EvalReportBody b;
    b.val = fedgraph::evaluate(model_, params, shard_.val, metric_);
    b.test = fedgraph::evaluate(model_, params, shard_.test, metric_);
    send(MessageType::kEvalReport, round, encode_eval(b));
  }

  Endpoint& ep_;
  const ClientShard& shard_;
  const GnnModel& model_;
  const FLConfig& fl_;
  const std::optional<SecureOptions>& secure_;
  EvalMetric metric_;
  milliseconds wait_;
  std::deque<RoundMessage> pending_;
  std::vector<RoundMessage> early_;
};

}  // namespace

void run_client(Endpoint& endpoint, const ClientShard& shard, const GnnModel& model,
                const FLConfig& fl, const std::optional<SecureOptions>& secure) {
  try {
    ClientWorker(endpoint, shard, model, fl, secure).serve();
  } catch (...) {
    try {
      endpoint.send(control_message(ControlKind::kAbort, 0, kServerId));
    } catch (const Error&) {
    }
    throw;
  }
}

TrainingReport run_training(std::span<const ClientShard> shards, const ModelConfig& model_config,
                            const FLConfig& fl, TransportKind transport,
                            const std::optional<SecureOptions>& secure) {
  require(!shards.empty(), ErrorCode::kEmptyUpdateSet, "no client shards");
  require(shards.size() == fl.num_clients, ErrorCode::kInvalidConfig,
          "fl.num_clients: " + std::to_string(fl.num_clients) + " but " +
              std::to_string(shards.size()) + " shards");
  fl.validate();
  if (secure) secure->validate(fl.participants());
  for (const ClientShard& s : shards) {
    require(!enumerate_units(s.train).empty(), ErrorCode::kEmptyShard,
            "client " + std::to_string(s.client_id) + " has no training units");
  }
  const GnnModel model = model_for(model_config, shards[0].train);
  const TaskType task = shards[0].train.task;
  resolve_metric(fl, task);

  std::vector<std::exception_ptr> client_errors(shards.size());
  std::vector<std::thread> workers;
  std::optional<TrainingReport> report;
  std::exception_ptr server_error;

  if (transport == TransportKind::kMemory) {
    auto hub = MemoryHub::create();
    auto server = hub->attach(kServerId);
    std::vector<std::unique_ptr<Endpoint>> eps;
    for (std::size_t k = 0; k < shards.size(); ++k) eps.push_back(hub->attach(endpoint_of(k)));
    for (std::size_t k = 0; k < shards.size(); ++k) {
      workers.emplace_back([&, k] {
        try {
          run_client(*eps[k], shards[k], model, fl, secure);
        } catch (...) {
          client_errors[k] = std::current_exception();
        }
      });
    }
    try {
      report = run_server(*server, model, fl, secure, task);
    } catch (...) {
      server_error = std::current_exception();
    }
    for (auto& w : workers) w.join();
  } else {
    TcpServer server(0);
    const milliseconds connect_timeout(30000);
    for (std::size_t k = 0; k < shards.size(); ++k) {
      workers.emplace_back([&, k] {
        try {
          auto ep = tcp_connect("127.0.0.1", server.port(), endpoint_of(k), connect_timeout);
          run_client(*ep, shards[k], model, fl, secure);
        } catch (...) {
          client_errors[k] = std::current_exception();
        }
      });
    }
    try {
      server.accept_clients(shards.size(), connect_timeout);
      report = run_server(server, model, fl, secure, task);
    } catch (...) {
      server_error = std::current_exception();
      server.close();
    }
    for (auto& w : workers) w.join();
    server.close();
  }
  for (auto& e : client_errors) {
    if (e) std::rethrow_exception(e);
  }
  if (server_error) std::rethrow_exception(server_error);
  return std::move(*report);
}

TrainingReport train_centralized(const ClientShard& shard, const ModelConfig& model_config,
                                 const FLConfig& fl) {
  fl.validate();
  const GnnModel model = model_for(model_config, shard.train);
  const EvalMetric metric = resolve_metric(fl, shard.train.task);
  TrainingReport report;
  report.mode = "centralized";
  report.metric = std::string(metric_name(metric));
  report.seed = fl.seed;
  report.param_count = model.layout().total_size();
  const auto run_start = Clock::now();
  ParamVector params = model.initial_params(derive_seed(fl.seed, "init"));
  for (std::size_t r = 1; r <= fl.rounds; ++r) {
    const auto start = Clock::now();
    ClientUpdate u = local_train(model, params, shard, fl.local_epochs, fl.optimizer,
                                 train_seed(fl.seed, r, shard.client_id));
    RoundRecord rec;
    rec.round = r;
    rec.participants = 1;
    rec.mean_train_loss = u.train_loss;
    params = std::move(u.params);
    if (fl.is_eval_round(r)) {
      rec.val_metric = evaluate(model, params, shard.val, metric).value;
      rec.test_metric = evaluate(model, params, shard.test, metric).value;
    }
    report.rounds.push_back(rec);
    report.round_wall_ms.push_back(elapsed_ms(start));
  }
  report.final_params = std::move(params);
  report.total_wall_ms = elapsed_ms(run_start);
  finalize_report(report, higher_is_better(metric));
  return report;
}

}  // namespace fedgraph
