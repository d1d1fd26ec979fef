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

#include "fedgraph/cli/commands.hpp"

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fedgraph/comm/message.hpp"
#include "fedgraph/comm/tcp.hpp"
#include "fedgraph/common/log.hpp"
#include "fedgraph/fl/runner.hpp"

extern char** environ;

namespace fedgraph {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInsufficientSurvivors:
      return kExitSurvivors;
    case ErrorCode::kTransportFailure:
    case ErrorCode::kTimeout:
    case ErrorCode::kConnectionClosed:
    case ErrorCode::kTruncatedFrame:
    case ErrorCode::kUnknownType:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kCorruptHeader:
      return kExitTransport;
    default:
      return kExitInvalid;
  }
}

ordered_json load_run_document(const std::filesystem::path& path, const Overrides& overrides) {
  ordered_json doc = read_json_file(path);
  for (const auto& [key, value] : overrides) set_config_value(doc, key, value, true);
  return doc;
}

namespace {

using std::chrono::milliseconds;

std::optional<SecureOptions> secure_of(const RunConfig& c) {
  if (!c.secure_enabled) return std::nullopt;
  return c.secure;
}

RunConfig config_from_request(const TrainRequest& r) {
  const ordered_json doc = load_run_document(r.config_path, r.overrides);
  return parse_run_config(doc, r.config_path.parent_path());
}

std::vector<std::string> client_argv(const TrainRequest& r, std::size_t client, int port) {
  std::vector<std::string> args = {r.client_executable.string(), "client",
                                   "--config", r.config_path.string(),
                                   "--client", std::to_string(client),
                                   "--port", std::to_string(port)};
  for (const auto& [key, value] : r.overrides) {
    args.push_back("--set");
    args.push_back(key + "=" + value.dump());
  }
  return args;
}

pid_t spawn(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  for (const std::string& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, argv[0], nullptr, nullptr, argv.data(), environ);
  if (rc != 0) fail(ErrorCode::kTransportFailure, "cannot start client process " + args[0]);
  return pid;
}

// Waits for every child; returns the first abnormal status description.
std::optional<std::string> reap(const std::vector<pid_t>& kids, bool terminate) {
  std::optional<std::string> problem;
  for (std::size_t k = 0; k < kids.size(); ++k) {
    if (terminate) kill(kids[k], SIGTERM);
    int status = 0;
    if (waitpid(kids[k], &status, 0) < 0) continue;
    if (!problem && !(WIFEXITED(status) && WEXITSTATUS(status) == 0)) {
      problem = "client " + std::to_string(k) + " process exited with status " +
                std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status));
    }
  }
  return problem;
}

TrainingReport run_tcp(const RunConfig& c, const Partitioned& parts, const TrainRequest& request) {
  require(!request.client_executable.empty(), ErrorCode::kInvalidConfig,
          "tcp transport needs the client executable");
  const GnnModel model = model_for(c.model, parts.shards.at(0).train);
  TcpServer server(0);
  std::vector<pid_t> kids;
  TrainingReport report;
  try {
    for (std::size_t k = 0; k < parts.shards.size(); ++k) {
      kids.push_back(spawn(client_argv(request, k, server.port())));
    }
    server.accept_clients(parts.shards.size(), milliseconds(60000));
    report = run_server(server, model, c.fl, secure_of(c), parts.shards[0].train.task);
  } catch (...) {
    server.close();
    reap(kids, false);
    throw;
  }
  const auto problem = reap(kids, false);
  server.close();
  if (problem) fail(ErrorCode::kTransportFailure, *problem);
  return report;
}

}  // namespace

TrainResult execute_run(const RunConfig& c, bool centralized, TransportKind transport,
                        const TrainRequest* tcp_request) {
  const GraphDataset data = load_run_data(c);
  check_run_consistency(c, data);
  const Partitioned parts = partition_for_run(c, data, centralized);
  TrainResult out;
  out.config = c;
  out.echo = run_config_to_json(c, false);
  if (centralized) {
    if (c.secure_enabled) logger().warn("secure aggregation does not apply to a centralized run");
    out.report = train_centralized(parts.shards.at(0), c.model, c.fl);
  } else if (transport == TransportKind::kTcp) {
    require(tcp_request != nullptr, ErrorCode::kInvalidConfig, "tcp transport needs a train request");
    out.report = run_tcp(c, parts, *tcp_request);
  } else {
    out.report = run_training(parts.shards, c.model, c.fl, TransportKind::kMemory, secure_of(c));
  }
  return out;
}

TrainResult execute_train(const TrainRequest& request) {
  const RunConfig c = config_from_request(request);
  return execute_run(c, request.centralized, request.transport, &request);
}

void write_train_outputs(const TrainResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "report.json", report_to_json(r.report, &r.echo));
  write_text_file(dir / "report.csv", report_to_csv(r.report));
  write_text_file(dir / "timing.json", timing_to_json(r.report));
  const Bytes model = serialize_params(r.report.final_params);
  write_text_file(dir / "model.bin", std::string_view(reinterpret_cast<const char*>(model.data()), model.size()));
}

namespace {

std::string metric_text(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

void print_report(const TrainingReport& r, std::ostream& os) {
  for (const RoundRecord& rec : r.rounds) {
    char loss[32];
    std::snprintf(loss, sizeof loss, "%.6f", rec.mean_train_loss);
    os << "round " << rec.round << ": participants " << rec.participants << ", train loss " << loss;
    if (rec.val_metric) os << ", val " << r.metric << " " << metric_text(rec.val_metric);
    if (rec.test_metric) os << ", test " << r.metric << " " << metric_text(rec.test_metric);
    os << "\n";
  }
  os << "final test " << r.metric << " " << metric_text(r.final_test_metric);
  if (r.best_val_round) {
    os << " (best val round " << *r.best_val_round << ", test " << metric_text(r.best_val_test_metric) << ")";
  }
  os << "\n";
}

// --- gen-data ---------------------------------------------------------------

struct GenDataArgs {
  std::string kind;
  std::optional<std::size_t> nodes, graphs, users;
  std::size_t classes = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_data(const GenDataArgs& a) {
  const int given = int(a.nodes.has_value()) + int(a.graphs.has_value()) + int(a.users.has_value());
  if (given != 1) fail(ErrorCode::kInvalidParams, "give exactly one of --nodes, --graphs, --users");
  const std::size_t size = a.nodes ? *a.nodes : a.graphs ? *a.graphs : *a.users;
  const SyntheticKind kind = parse_synthetic_kind(a.kind);
  const GraphDataset data = gen_synthetic(kind, size, a.classes, a.seed);
  save_dataset(data, a.out);
  std::size_t nodes = 0, edges = 0;
  for (const Graph& g : data.graphs) {
    nodes += g.num_nodes();
    edges += g.num_edges();
  }
  std::cout << "wrote " << a.out << ": " << synthetic_kind_name(kind) << ", task "
            << task_name(data.task) << ", " << data.graphs.size() << " graphs, " << nodes
            << " nodes, " << edges << " edges, node_feature_dim " << data.node_feature_dim
            << ", num_tasks_or_classes " << data.num_tasks_or_classes << "\n";
  return kExitOk;
}

// --- partition --------------------------------------------------------------

struct PartitionArgs {
  std::string input;
  std::string format = "json";
  std::size_t clients = 1;
  std::string scheme = "uniform";
  double alpha = 0.5;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::optional<std::size_t> egos;
  std::size_t hops = 2;
  bool global_split = false;
};

std::string histogram_table(const GraphDataset& data, const ShardManifest& manifest) {
  const std::vector<int> classes = unit_classes(data);
  const auto counts = class_histogram(classes, manifest.assignments);
  const std::size_t width = counts.empty() ? 0 : counts[0].size();
  std::ostringstream os;
  os << "client";
  for (std::size_t c = 0; c < width; ++c) {
    os << '\t' << (c < data.class_names.size() ? data.class_names[c] : "class_" + std::to_string(c));
  }
  os << "\ttotal\n";
  for (std::size_t j = 0; j < counts.size(); ++j) {
    std::size_t total = 0;
    os << j;
    for (std::size_t v : counts[j]) {
      os << '\t' << v;
      total += v;
    }
    os << '\t' << total << '\n';
  }
  return os.str();
}

int cmd_partition(const PartitionArgs& a) {
  LoadResult loaded = load_dataset(a.input, parse_dataset_format(a.format));
  if (loaded.dropped_edges > 0) logger().warn("{}: dropped {} edges", a.input, loaded.dropped_edges);
  GraphDataset data = std::move(loaded.dataset);
  if (a.egos) data = sample_ego_networks(data, *a.egos, a.hops, a.seed);
  PartitionSpec spec;
  spec.scheme = parse_scheme(a.scheme);
  spec.alpha = a.alpha;
  spec.num_clients = a.clients;
  spec.seed = a.seed;
  spec.global_split = a.global_split;
  const Partitioned parts = make_shards(data, spec);
  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  write_text_file(dir / "manifest.json", manifest_to_json(parts.manifest));
  const std::string table = histogram_table(data, parts.manifest);
  write_text_file(dir / "histogram.tsv", table);
  for (const ClientShard& s : parts.shards) {
    const std::string stem = "client_" + std::to_string(s.client_id);
    save_dataset(s.train, dir / (stem + "_train.json"));
    save_dataset(s.val, dir / (stem + "_val.json"));
    save_dataset(s.test, dir / (stem + "_test.json"));
  }
  std::cout << table;
  return kExitOk;
}

// --- train / client ---------------------------------------------------------

struct TrainArgs {
  std::string config;
  bool centralized = false;
  bool secure = false;
  std::string transport = "memory";
  std::optional<std::string> output_dir;
  std::optional<std::size_t> rounds, clients;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
  std::vector<std::string> sets;
};

// Flags beat --set, which beats the file.
Overrides overrides_of(const TrainArgs& a, const ordered_json& file) {
  Overrides o;
  for (const std::string& s : a.sets) o.push_back(parse_assignment(s));
  if (a.secure) o.emplace_back("secure.enabled", true);
  if (a.rounds) o.emplace_back("fl.rounds", *a.rounds);
  if (a.seed) o.emplace_back("fl.seed", *a.seed);
  if (a.lr) o.emplace_back("fl.optimizer.learning_rate", *a.lr);
  if (a.clients) {
    o.emplace_back("fl.num_clients", *a.clients);
    if (has_config_path(file, "partition.num_clients")) o.emplace_back("partition.num_clients", *a.clients);
  }
  if (a.output_dir) {
    o.emplace_back("output_dir", std::filesystem::absolute(*a.output_dir).string());
  }
  return o;
}

TransportKind parse_transport(const std::string& name) {
  if (name == "memory") return TransportKind::kMemory;
  if (name == "tcp") return TransportKind::kTcp;
  fail(ErrorCode::kInvalidConfig, "--transport: unknown transport '" + name + "'");
}

int cmd_train(const TrainArgs& a, const std::filesystem::path& self) {
  TrainRequest r;
  r.config_path = std::filesystem::absolute(a.config);
  r.overrides = overrides_of(a, read_json_file(r.config_path));
  r.centralized = a.centralized;
  r.transport = parse_transport(a.transport);
  r.client_executable = self;
  const TrainResult result = execute_train(r);
  const std::filesystem::path dir = result.config.output_path();
  write_train_outputs(result, dir);
  print_report(result.report, std::cout);
  std::cout << "wrote " << (dir / "report.json").string() << "\n";
  return kExitOk;
}

struct ClientArgs {
  std::string config;
  std::vector<std::string> sets;
  std::size_t client = 0;
  std::string host = "127.0.0.1";
  int port = 0;
};

int cmd_client(const ClientArgs& a) {
  Overrides o;
  for (const std::string& s : a.sets) o.push_back(parse_assignment(s));
  const std::filesystem::path path(a.config);
  const RunConfig c = parse_run_config(load_run_document(path, o), path.parent_path());
  const GraphDataset data = load_run_data(c);
  check_run_consistency(c, data);
  const Partitioned parts = partition_for_run(c, data, false);
  require(a.client < parts.shards.size(), ErrorCode::kUnknownParticipant,
          "client " + std::to_string(a.client) + " of " + std::to_string(parts.shards.size()));
  const ClientShard& shard = parts.shards[a.client];
  const GnnModel model = model_for(c.model, parts.shards[0].train);
  auto ep = tcp_connect(a.host, static_cast<std::uint16_t>(a.port), endpoint_of(a.client), milliseconds(60000));
  run_client(*ep, shard, model, c.fl, secure_of(c));
  ep->close();
  return kExitOk;
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string grid;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> jobs;
};

std::string cell(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

int cmd_sweep(const SweepArgs& a) {
  const std::filesystem::path grid_path = std::filesystem::absolute(a.grid);
  const ordered_json spec = read_json_file(grid_path);
  if (!spec.is_object()) fail(ErrorCode::kInvalidConfig, "grid: must be an object");
  for (const auto& item : spec.items()) {
    static const std::set<std::string> known = {"base", "grid", "centralized", "jobs", "output_dir"};
    if (!known.count(item.key())) fail(ErrorCode::kInvalidConfig, item.key() + ": unknown key");
  }
  if (!spec.contains("base")) fail(ErrorCode::kInvalidConfig, "base: required");
  ordered_json base_doc;
  std::filesystem::path base_dir = grid_path.parent_path();
  if (spec["base"].is_string()) {
    std::filesystem::path p(spec["base"].get<std::string>());
    if (p.is_relative()) p = base_dir / p;
    base_doc = read_json_file(p);
    base_dir = p.parent_path();
  } else {
    base_doc = spec["base"];
  }
  const RunConfig base = parse_run_config(base_doc, base_dir);
  const ordered_json normalized = run_config_to_json(base);

  if (!spec.contains("grid") || !spec["grid"].is_object()) fail(ErrorCode::kInvalidConfig, "grid: must be an object");
  std::vector<std::string> keys;
  std::vector<std::vector<ordered_json>> values;
  for (const auto& item : spec["grid"].items()) {
    if (!has_config_path(normalized, item.key()) || item.key() == "output_dir") {
      fail(ErrorCode::kInvalidConfig, "grid." + item.key() + ": unknown key");
    }
    if (!item.value().is_array() || item.value().empty()) {
      fail(ErrorCode::kInvalidConfig, "grid." + item.key() + ": must be a nonempty array");
    }
    keys.push_back(item.key());
    values.emplace_back(item.value().begin(), item.value().end());
  }
  bool centralized = false;
  if (spec.contains("centralized")) {
    if (!spec["centralized"].is_boolean()) fail(ErrorCode::kInvalidConfig, "centralized: must be true or false");
    centralized = spec["centralized"].get<bool>();
  }
  std::size_t jobs = 1;
  if (spec.contains("jobs")) {
    if (!spec["jobs"].is_number_unsigned() || spec["jobs"].get<std::size_t>() < 1) {
      fail(ErrorCode::kInvalidConfig, "jobs: must be a positive integer");
    }
    jobs = spec["jobs"].get<std::size_t>();
  }
  if (a.jobs) jobs = std::max<std::size_t>(1, *a.jobs);
  std::filesystem::path out_dir = a.out_dir ? std::filesystem::absolute(*a.out_dir)
                                  : spec.contains("output_dir")
                                      ? base_dir / spec["output_dir"].get<std::string>()
                                      : base.output_path();

  // Row-major over the grid, first key slowest; every trial validated up front.
  std::size_t total = 1;
  for (const auto& v : values) total *= v.size();
  std::vector<RunConfig> trials;
  std::vector<std::vector<ordered_json>> picked;
  for (std::size_t t = 0; t < total; ++t) {
    ordered_json doc = normalized;
    std::vector<ordered_json> row;
    std::size_t rest = t;
    for (std::size_t k = keys.size(); k-- > 0;) {
      row.insert(row.begin(), values[k][rest % values[k].size()]);
      rest /= values[k].size();
    }
    for (std::size_t k = 0; k < keys.size(); ++k) set_config_value(doc, keys[k], row[k]);
    trials.push_back(parse_run_config(doc, base_dir));
    picked.push_back(std::move(row));
  }

  std::vector<std::optional<TrainResult>> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::vector<double> wall(total, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        results[t] = execute_run(trials[t], centralized, TransportKind::kMemory);
      } catch (...) {
        errors[t] = std::current_exception();
      }
      wall[t] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::min(jobs, total); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const bool higher = higher_is_better(parse_metric(results[0]->report.metric));
  std::optional<std::size_t> best;
  for (std::size_t t = 0; t < total; ++t) {
    const auto& v = results[t]->report.final_val_metric;
    if (!v || std::isnan(*v)) continue;
    const double b = best ? *results[*best]->report.final_val_metric : 0.0;
    if (!best || (higher ? *v > b : *v < b)) best = t;
  }

  std::filesystem::create_directories(out_dir);
  std::ostringstream board, timing;
  board << "trial";
  for (const std::string& k : keys) board << ',' << k;
  board << ",val_metric,test_metric,best_val_round,best_val_test_metric,best\n";
  timing << "trial,wall_ms,total_wall_ms\n";
  auto num = [](const std::optional<double>& v) {
    return v && !std::isnan(*v) ? format_double(*v) : std::string();
  };
  for (std::size_t t = 0; t < total; ++t) {
    const TrainingReport& r = results[t]->report;
    board << t;
    for (const ordered_json& v : picked[t]) board << ',' << cell(v);
    board << ',' << num(r.final_val_metric) << ',' << num(r.final_test_metric) << ','
          << (r.best_val_round ? std::to_string(*r.best_val_round) : "") << ','
          << num(r.best_val_test_metric) << ',' << (best == t ? 1 : 0) << '\n';
    timing << t << ',' << format_double(wall[t]) << ',' << format_double(r.total_wall_ms) << '\n';
    write_train_outputs(*results[t], out_dir / "trials" / ("trial_" + std::to_string(t)));
  }
  write_text_file(out_dir / "leaderboard.csv", board.str());
  write_text_file(out_dir / "leaderboard_timing.csv", timing.str());
  std::cout << board.str();
  if (best) std::cout << "best trial " << *best << " by val " << results[*best]->report.metric << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  init_logging_from_env();
  CLI::App app{"Federated graph neural network simulator", "fedgraph"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  gen_cmd->add_option("--kind", gen.kind, "sbm_node | motif_graph | bipartite_rating")->required();
  gen_cmd->add_option("--nodes", gen.nodes, "Node count (sbm_node)");
  gen_cmd->add_option("--graphs", gen.graphs, "Graph count (motif_graph)");
  gen_cmd->add_option("--users", gen.users, "User count (bipartite_rating)");
  gen_cmd->add_option("--classes", gen.classes, "Blocks or item categories; 0 keeps the default");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "Output dataset file")->required();

  PartitionArgs part;
  auto* part_cmd = app.add_subcommand("partition", "Split a dataset across clients");
  part_cmd->add_option("--input", part.input)->required();
  part_cmd->add_option("--format", part.format, "json | planetoid");
  part_cmd->add_option("--clients", part.clients);
  part_cmd->add_option("--scheme", part.scheme, "lda | uniform | metadata");
  part_cmd->add_option("--alpha", part.alpha);
  part_cmd->add_option("--seed", part.seed);
  part_cmd->add_option("--out-dir", part.out_dir)->required();
  part_cmd->add_option("--egos", part.egos, "Sample this many ego networks first");
  part_cmd->add_option("--hops", part.hops, "Ego network radius");
  part_cmd->add_flag("--global-split", part.global_split, "Split before assigning clients");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Run centralized or federated training");
  train_cmd->add_option("--config", train.config)->required();
  train_cmd->add_flag("--centralized", train.centralized);
  train_cmd->add_flag("--secure", train.secure);
  train_cmd->add_option("--transport", train.transport, "memory | tcp");
  train_cmd->add_option("--output-dir", train.output_dir);
  train_cmd->add_option("--rounds", train.rounds);
  train_cmd->add_option("--clients", train.clients);
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--lr", train.lr);
  train_cmd->add_option("--set", train.sets, "Override a config key: section.key=value");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid search over config keys");
  sweep_cmd->add_option("--grid", sweep.grid)->required();
  sweep_cmd->add_option("--out-dir", sweep.out_dir);
  sweep_cmd->add_option("--jobs", sweep.jobs);

  ClientArgs client;
  auto* client_cmd = app.add_subcommand("client", "");
  client_cmd->group("");
  client_cmd->add_option("--config", client.config)->required();
  client_cmd->add_option("--set", client.sets);
  client_cmd->add_option("--client", client.client)->required();
  client_cmd->add_option("--host", client.host);
  client_cmd->add_option("--port", client.port)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen);
    if (*part_cmd) return cmd_partition(part);
    if (*train_cmd) return cmd_train(train, std::filesystem::canonical("/proc/self/exe"));
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*client_cmd) return cmd_client(client);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInvalid;
}

}  // namespace fedgraph
