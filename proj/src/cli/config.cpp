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

#include "fedgraph/cli/config.hpp"

#include <cmath>
#include <set>

#include "fedgraph/common/error.hpp"
#include "fedgraph/common/log.hpp"

namespace fedgraph {
namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorCode::kInvalidConfig, key + ": " + why);
}

// Typed, key-tracking view of one JSON object.
class Section {
 public:
  Section(const ordered_json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) bad(path_.empty() ? "config" : path_, "must be an object");
  }

  std::string key(std::string_view k) const {
    return path_.empty() ? std::string(k) : path_ + "." + std::string(k);
  }

  bool has(std::string_view k) {
    seen_.insert(std::string(k));
    return node_.contains(k) && !node_.at(std::string(k)).is_null();
  }

  const ordered_json& at(std::string_view k) {
    seen_.insert(std::string(k));
    return node_.at(std::string(k));
  }

  std::uint64_t u64(std::string_view k, std::uint64_t def) {
    if (!has(k)) return def;
    const auto& v = at(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      bad(key(k), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::size_t count(std::string_view k, std::size_t def) {
    return static_cast<std::size_t>(u64(k, def));
  }

  std::int64_t i64(std::string_view k, std::int64_t def) {
    if (!has(k)) return def;
    const auto& v = at(k);
    if (!v.is_number_integer()) bad(key(k), "must be an integer");
    return v.get<std::int64_t>();
  }

  double real(std::string_view k, double def) {
    if (!has(k)) return def;
    const auto& v = at(k);
    if (!v.is_number()) bad(key(k), "must be a number");
    return v.get<double>();
  }

  bool flag(std::string_view k, bool def) {
    if (!has(k)) return def;
    const auto& v = at(k);
    if (!v.is_boolean()) bad(key(k), "must be true or false");
    return v.get<bool>();
  }

  std::string text(std::string_view k, std::string def) {
    if (!has(k)) return def;
    const auto& v = at(k);
    if (!v.is_string()) bad(key(k), "must be a string");
    return v.get<std::string>();
  }

  // Runs a name parser, re-labelling its failure with this key.
  template <typename F>
  auto named(std::string_view k, std::string def, F&& parse) {
    const std::string name = text(k, std::move(def));
    try {
      return parse(name);
    } catch (const Error&) {
      bad(key(k), "unknown value '" + name + "'");
    }
  }

  Section child(std::string_view k) {
    static const ordered_json empty = ordered_json::object();
    return Section(has(k) ? at(k) : empty, key(k));
  }

  void done() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) bad(key(item.key()), "unknown key");
    }
  }

 private:
  const ordered_json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string_view drop_stage_name(DropStage s) {
  return s == DropStage::kBeforeUpload ? "before_upload" : "before_aggregate_share";
}

DropStage parse_drop_stage(std::string_view name) {
  if (name == "before_upload") return DropStage::kBeforeUpload;
  if (name == "before_aggregate_share") return DropStage::kBeforeAggregateShare;
  fail(ErrorCode::kInvalidConfig, "unknown dropout stage");
}

std::string_view format_name(DatasetFormat f) {
  return f == DatasetFormat::kJson ? "json" : "planetoid";
}

SyntheticSpec parse_synthetic(Section s) {
  SyntheticSpec out;
  out.kind = s.named("kind", "motif_graph", parse_synthetic_kind);
  out.seed = s.u64("seed", 0);
  switch (out.kind) {
    case SyntheticKind::kSbmNode:
      out.sbm.num_nodes = s.count("num_nodes", out.sbm.num_nodes);
      out.sbm.num_blocks = s.count("num_blocks", out.sbm.num_blocks);
      out.sbm.p_in = s.real("p_in", out.sbm.p_in);
      out.sbm.p_out = s.real("p_out", out.sbm.p_out);
      out.sbm.feature_noise = s.real("feature_noise", out.sbm.feature_noise);
      break;
    case SyntheticKind::kMotifGraph:
      out.motif.num_graphs = s.count("num_graphs", out.motif.num_graphs);
      out.motif.min_nodes = s.count("min_nodes", out.motif.min_nodes);
      out.motif.max_nodes = s.count("max_nodes", out.motif.max_nodes);
      out.motif.max_degree_feature = s.count("max_degree_feature", out.motif.max_degree_feature);
      out.motif.chord_probability = s.real("chord_probability", out.motif.chord_probability);
      break;
    case SyntheticKind::kBipartiteRating:
      out.bipartite.num_users = s.count("num_users", out.bipartite.num_users);
      out.bipartite.num_items = s.count("num_items", out.bipartite.num_items);
      out.bipartite.num_categories = s.count("num_categories", out.bipartite.num_categories);
      out.bipartite.ratings_per_user = s.count("ratings_per_user", out.bipartite.ratings_per_user);
      out.bipartite.noise = s.real("noise", out.bipartite.noise);
      break;
  }
  s.done();
  return out;
}

ordered_json synthetic_to_json(const SyntheticSpec& s) {
  ordered_json j;
  j["kind"] = synthetic_kind_name(s.kind);
  j["seed"] = s.seed;
  switch (s.kind) {
    case SyntheticKind::kSbmNode:
      j["num_nodes"] = s.sbm.num_nodes;
      j["num_blocks"] = s.sbm.num_blocks;
      j["p_in"] = s.sbm.p_in;
      j["p_out"] = s.sbm.p_out;
      j["feature_noise"] = s.sbm.feature_noise;
      break;
    case SyntheticKind::kMotifGraph:
      j["num_graphs"] = s.motif.num_graphs;
      j["min_nodes"] = s.motif.min_nodes;
      j["max_nodes"] = s.motif.max_nodes;
      j["max_degree_feature"] = s.motif.max_degree_feature;
      j["chord_probability"] = s.motif.chord_probability;
      break;
    case SyntheticKind::kBipartiteRating:
      j["num_users"] = s.bipartite.num_users;
      j["num_items"] = s.bipartite.num_items;
      j["num_categories"] = s.bipartite.num_categories;
      j["ratings_per_user"] = s.bipartite.ratings_per_user;
      j["noise"] = s.bipartite.noise;
      break;
  }
  return j;
}

DataSpec parse_data(Section s) {
  DataSpec d;
  if (s.has("path")) d.path = s.text("path", "");
  d.format = s.named("format", "json", parse_dataset_format);
  if (s.has("synthetic")) d.synthetic = parse_synthetic(s.child("synthetic"));
  if (d.path.has_value() == d.synthetic.has_value()) {
    bad(s.key(d.path ? "synthetic" : "path"), "exactly one of data.path and data.synthetic is required");
  }
  if (d.path && d.path->empty()) bad("data.path", "must not be empty");
  if (s.has("egos")) {
    Section e = s.child("egos");
    EgoSpec ego;
    ego.count = e.count("count", ego.count);
    ego.hops = e.count("hops", ego.hops);
    ego.seed = e.u64("seed", ego.seed);
    e.done();
    if (ego.count < 1) bad("data.egos.count", "must be >= 1");
    d.egos = ego;
  }
  s.done();
  return d;
}

ModelConfig parse_model_section(Section s, std::optional<TaskType>& task) {
  ModelConfig m;
  m.model = s.named("model", "gcn", fedgraph::parse_model);
  if (s.has("task")) task = s.named("task", "", parse_task);
  m.num_layers = s.count("num_layers", m.num_layers);
  m.node_embedding_dim = s.count("node_embedding_dim", m.node_embedding_dim);
  m.hidden_dim = s.count("hidden_dim", m.hidden_dim);
  m.readout_dim = s.count("readout_dim", m.readout_dim);
  m.graph_embedding_dim = s.count("graph_embedding_dim", m.graph_embedding_dim);
  m.attention_heads = s.count("attention_heads", m.attention_heads);
  m.leaky_slope = s.real("leaky_slope", m.leaky_slope);
  m.dropout = s.real("dropout", m.dropout);
  m.pooling = s.named("pooling", "sum", parse_pooling);
  m.sgc_hops = s.count("sgc_hops", m.sgc_hops);
  s.done();
  return m;
}

FLConfig parse_fl(Section s, std::optional<std::size_t> partition_clients) {
  FLConfig f;
  f.num_clients = s.count("num_clients", partition_clients.value_or(f.num_clients));
  f.clients_per_round = s.count("clients_per_round", f.clients_per_round);
  f.rounds = s.count("rounds", f.rounds);
  f.local_epochs = s.count("local_epochs", f.local_epochs);
  {
    Section o = s.child("optimizer");
    f.optimizer.kind = o.named("kind", "adam", parse_optimizer);
    f.optimizer.learning_rate = o.real("learning_rate", f.optimizer.learning_rate);
    f.optimizer.beta1 = o.real("beta1", f.optimizer.beta1);
    f.optimizer.beta2 = o.real("beta2", f.optimizer.beta2);
    f.optimizer.epsilon = o.real("epsilon", f.optimizer.epsilon);
    o.done();
  }
  f.server = s.named("server", "fedavg", parse_server_algorithm);
  {
    Section o = s.child("fedopt");
    f.fedopt.server_lr = o.real("server_lr", f.fedopt.server_lr);
    f.fedopt.beta1 = o.real("beta1", f.fedopt.beta1);
    f.fedopt.beta2 = o.real("beta2", f.fedopt.beta2);
    f.fedopt.tau = o.real("tau", f.fedopt.tau);
    f.fedopt.adaptive = o.flag("adaptive", f.fedopt.adaptive);
    o.done();
  }
  f.eval_frequency = s.count("eval_frequency", f.eval_frequency);
  f.seed = s.u64("seed", f.seed);
  if (s.has("metric")) f.metric = s.named("metric", "", parse_metric);
  if (s.has("dropouts")) {
    const ordered_json& list = s.at("dropouts");
    if (!list.is_array()) bad("fl.dropouts", "must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section d(list[i], "fl.dropouts." + std::to_string(i));
      DropoutEvent e;
      e.round = d.count("round", e.round);
      e.client = d.count("client", e.client);
      e.stage = d.named("stage", "before_upload", parse_drop_stage);
      d.done();
      f.dropouts.push_back(e);
    }
  }
  f.round_timeout_ms = s.count("round_timeout_ms", f.round_timeout_ms);
  s.done();
  if (!(f.optimizer.beta1 >= 0.0 && f.optimizer.beta1 < 1.0)) {
    bad("fl.optimizer.beta1", "must lie in [0, 1)");
  }
  if (!(f.optimizer.beta2 >= 0.0 && f.optimizer.beta2 < 1.0)) {
    bad("fl.optimizer.beta2", "must lie in [0, 1)");
  }
  if (!(f.optimizer.epsilon > 0.0)) bad("fl.optimizer.epsilon", "must be > 0");
  return f;
}

}  // namespace

std::filesystem::path RunConfig::data_path() const {
  if (!data.path) return {};
  const std::filesystem::path p(*data.path);
  return p.is_absolute() ? p : base_dir / p;
}

std::filesystem::path RunConfig::output_path() const {
  const std::filesystem::path p(output_dir);
  return p.is_absolute() ? p : base_dir / p;
}

RunConfig parse_run_config(const ordered_json& doc, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  Section root(doc, "");
  if (!root.has("data")) bad("data", "section is required");
  c.data = parse_data(root.child("data"));

  std::optional<std::size_t> partition_clients;
  {
    Section p = root.child("partition");
    c.partition.scheme = p.named("scheme", "uniform", parse_scheme);
    c.partition.alpha = p.real("alpha", c.partition.alpha);
    if (p.has("num_clients")) partition_clients = p.count("num_clients", 1);
    c.partition.seed = p.u64("seed", c.partition.seed);
    Section r = p.child("split");
    c.partition.ratios.train = r.real("train", c.partition.ratios.train);
    c.partition.ratios.val = r.real("val", c.partition.ratios.val);
    c.partition.ratios.test = r.real("test", c.partition.ratios.test);
    r.done();
    c.partition.global_split = p.flag("global_split", c.partition.global_split);
    p.done();
  }
  c.model = parse_model_section(root.child("model"), c.model_task);
  c.fl = parse_fl(root.child("fl"), partition_clients);
  if (partition_clients && *partition_clients != c.fl.num_clients) {
    bad("partition.num_clients", std::to_string(*partition_clients) + " does not match fl.num_clients " +
                                     std::to_string(c.fl.num_clients));
  }
  c.partition.num_clients = c.fl.num_clients;
  {
    Section s = root.child("secure");
    c.secure_enabled = s.flag("enabled", root.has("secure"));
    c.secure.threshold = s.count("threshold", c.secure.threshold);
    c.secure.scale_bits = static_cast<int>(s.i64("scale_bits", c.secure.scale_bits));
    c.secure.clamp_bound = s.i64("clamp_bound", c.secure.clamp_bound);
    s.done();
  }
  c.output_dir = root.text("output_dir", c.output_dir);
  if (c.output_dir.empty()) bad("output_dir", "must not be empty");
  root.done();

  // Self-contained checks, before any data is touched.
  c.fl.validate();
  c.model.validate();
  try {
    c.partition.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidParams) fail(ErrorCode::kInvalidConfig, std::string("partition.split: ") + e.what());
    throw;
  }
  if (c.secure_enabled) c.secure.validate(c.fl.participants());
  return c;
}

ordered_json run_config_to_json(const RunConfig& c, bool with_output_dir) {
  ordered_json j;
  ordered_json& d = j["data"];
  if (c.data.path) d["path"] = *c.data.path;
  d["format"] = format_name(c.data.format);
  if (c.data.synthetic) d["synthetic"] = synthetic_to_json(*c.data.synthetic);
  if (c.data.egos) {
    d["egos"] = {{"count", c.data.egos->count}, {"hops", c.data.egos->hops}, {"seed", c.data.egos->seed}};
  }

  ordered_json& p = j["partition"];
  p["scheme"] = scheme_name(c.partition.scheme);
  p["alpha"] = c.partition.alpha;
  p["num_clients"] = c.partition.num_clients;
  p["seed"] = c.partition.seed;
  p["split"] = {{"train", c.partition.ratios.train},
                {"val", c.partition.ratios.val},
                {"test", c.partition.ratios.test}};
  p["global_split"] = c.partition.global_split;

  ordered_json& m = j["model"];
  m["model"] = model_name(c.model.model);
  if (c.model_task) m["task"] = task_name(*c.model_task);
  m["num_layers"] = c.model.num_layers;
  m["node_embedding_dim"] = c.model.node_embedding_dim;
  m["hidden_dim"] = c.model.hidden_dim;
  m["readout_dim"] = c.model.readout_dim;
  m["graph_embedding_dim"] = c.model.graph_embedding_dim;
  m["attention_heads"] = c.model.attention_heads;
  m["leaky_slope"] = c.model.leaky_slope;
  m["dropout"] = c.model.dropout;
  m["pooling"] = pooling_name(c.model.pooling);
  m["sgc_hops"] = c.model.sgc_hops;

  ordered_json& f = j["fl"];
  f["num_clients"] = c.fl.num_clients;
  f["clients_per_round"] = c.fl.clients_per_round;
  f["rounds"] = c.fl.rounds;
  f["local_epochs"] = c.fl.local_epochs;
  f["optimizer"] = {{"kind", optimizer_name(c.fl.optimizer.kind)},
                    {"learning_rate", c.fl.optimizer.learning_rate},
                    {"beta1", c.fl.optimizer.beta1},
                    {"beta2", c.fl.optimizer.beta2},
                    {"epsilon", c.fl.optimizer.epsilon}};
  f["server"] = server_algorithm_name(c.fl.server);
  f["fedopt"] = {{"server_lr", c.fl.fedopt.server_lr},
                 {"beta1", c.fl.fedopt.beta1},
                 {"beta2", c.fl.fedopt.beta2},
                 {"tau", c.fl.fedopt.tau},
                 {"adaptive", c.fl.fedopt.adaptive}};
  f["eval_frequency"] = c.fl.eval_frequency;
  f["seed"] = c.fl.seed;
  f["metric"] = c.fl.metric ? ordered_json(metric_name(*c.fl.metric)) : ordered_json(nullptr);
  f["dropouts"] = ordered_json::array();
  for (const DropoutEvent& e : c.fl.dropouts) {
    f["dropouts"].push_back({{"round", e.round}, {"client", e.client}, {"stage", drop_stage_name(e.stage)}});
  }
  f["round_timeout_ms"] = c.fl.round_timeout_ms;

  j["secure"] = {{"enabled", c.secure_enabled},
                 {"threshold", c.secure.threshold},
                 {"scale_bits", c.secure.scale_bits},
                 {"clamp_bound", c.secure.clamp_bound}};
  if (with_output_dir) j["output_dir"] = c.output_dir;
  return j;
}

ordered_json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

namespace {

std::vector<std::string> split_path(std::string_view dotted) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    parts.emplace_back(dotted.substr(start, dot - start));
    if (parts.back().empty()) bad(std::string(dotted), "malformed key path");
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

}  // namespace

void set_config_value(ordered_json& doc, std::string_view dotted, ordered_json value, bool create) {
  ordered_json* node = &doc;
  const auto parts = split_path(dotted);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (node->is_null() && create) *node = ordered_json::object();
    if (!node->is_object()) bad(std::string(dotted), "path does not name an object field");
    if (!node->contains(parts[i]) && !create) bad(std::string(dotted), "unknown key");
    node = &(*node)[parts[i]];
  }
  *node = std::move(value);
}

bool has_config_path(const ordered_json& doc, std::string_view dotted) {
  const ordered_json* node = &doc;
  for (const std::string& part : split_path(dotted)) {
    if (!node->is_object() || !node->contains(part)) return false;
    node = &node->at(part);
  }
  return true;
}

std::pair<std::string, ordered_json> parse_assignment(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    fail(ErrorCode::kInvalidConfig, "--set expects key=value, got '" + std::string(text) + "'");
  }
  const std::string key(text.substr(0, eq));
  const std::string raw(text.substr(eq + 1));
  ordered_json value = ordered_json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  return {key, value};
}

GraphDataset load_run_data(const RunConfig& c) {
  GraphDataset data;
  if (c.data.synthetic) {
    const SyntheticSpec& s = *c.data.synthetic;
    switch (s.kind) {
      case SyntheticKind::kSbmNode: data = gen_sbm_node(s.sbm, s.seed); break;
      case SyntheticKind::kMotifGraph: data = gen_motif_graph(s.motif, s.seed); break;
      case SyntheticKind::kBipartiteRating: data = gen_bipartite_rating(s.bipartite, s.seed).dataset; break;
    }
  } else {
    LoadResult r = load_dataset(c.data_path(), c.data.format);
    if (r.dropped_edges > 0) {
      logger().warn("{}: dropped {} edges naming unknown ids", c.data_path().string(), r.dropped_edges);
    }
    data = std::move(r.dataset);
  }
  if (c.data.egos) {
    if (data.task != TaskType::kNodeClassification) {
      bad("data.egos", "ego networks need a node_classification dataset, got " + std::string(task_name(data.task)));
    }
    data = sample_ego_networks(data, c.data.egos->count, c.data.egos->hops, c.data.egos->seed);
  }
  return data;
}

void check_run_consistency(const RunConfig& c, const GraphDataset& data) {
  if (c.model_task && *c.model_task != data.task) {
    bad("model.task", std::string(task_name(*c.model_task)) + " but the data is " +
                          std::string(task_name(data.task)));
  }
  if (c.fl.metric) {
    try {
      resolve_metric(c.fl, data.task);
    } catch (const Error&) {
      bad("fl.metric", std::string(metric_name(*c.fl.metric)) + " does not apply to " +
                           std::string(task_name(data.task)));
    }
  }
  if (c.partition.scheme == PartitionScheme::kMetadata) {
    for (const auto& cat : unit_categories(data)) {
      if (!cat) bad("partition.scheme", "metadata partitioning needs a category on every sample");
    }
  }
  const std::size_t units = enumerate_units(data).size();
  if (units < c.fl.num_clients) {
    bad("fl.num_clients", std::to_string(c.fl.num_clients) + " clients but only " +
                              std::to_string(units) + " samples");
  }
}

Partitioned partition_for_run(const RunConfig& c, const GraphDataset& data, bool centralized) {
  PartitionSpec spec = c.partition;
  if (centralized) {
    spec.scheme = PartitionScheme::kUniform;
    spec.num_clients = 1;
  }
  return make_shards(data, spec);
}

}  // namespace fedgraph
