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

#include "fedgraph/partition/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"
#include "fedgraph/common/log.hpp"

#include "fedgraph/common/error.hpp"
#include "fedgraph/common/rng.hpp"

namespace fedgraph {
namespace {

using Json = nlohmann::ordered_json;

void require_clients(std::size_t n, std::size_t num_clients) {
  require(num_clients >= 1, ErrorCode::kInvalidCount, "num_clients must be >= 1");
  require(n >= num_clients, ErrorCode::kMoreClientsThanSamples,
          std::to_string(num_clients) + " clients for " + std::to_string(n) + " samples");
}

void sort_clients(Assignment& a) {
  for (auto& c : a) std::sort(c.begin(), c.end());
}

std::vector<std::size_t> gather(std::span<const std::size_t> base,
                                std::span<const std::size_t> positions) {
  std::vector<std::size_t> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(base[p]);
  std::sort(out.begin(), out.end());
  return out;
}

Assignment assign(const PartitionSpec& spec, std::span<const int> classes,
                  std::span<const std::optional<int>> categories, std::uint64_t seed) {
  switch (spec.scheme) {
    case PartitionScheme::kLda:
      return lda_partition(classes, spec.num_clients, spec.alpha, seed);
    case PartitionScheme::kUniform:
      return uniform_partition(classes.size(), spec.num_clients, seed);
    case PartitionScheme::kMetadata:
      return metadata_partition(categories, spec.num_clients, seed);
  }
  fail(ErrorCode::kInvalidParams, "unknown scheme");
}

template <typename T>
std::vector<T> pick(std::span<const T> values, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(values[i]);
  return out;
}

Json indices_json(const std::vector<std::size_t>& v) { return Json(v); }

}  // namespace

void SplitRatios::validate() const {
  for (double r : {train, val, test}) {
    require(std::isfinite(r) && r >= 0.0 && r <= 1.0, ErrorCode::kInvalidParams,
            "partition.split_ratios entries must lie in [0, 1]");
  }
  require(std::abs(train + val + test - 1.0) <= 1e-9, ErrorCode::kInvalidParams,
          "partition.split_ratios must sum to 1");
}

SplitIndices split_indices(std::size_t n, const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  require(n > 0, ErrorCode::kEmptyDataset, "cannot split an empty dataset");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  // The epsilon keeps 10 * 0.1 from flooring to 0 through rounding.
  const auto floor_count = [n](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t n_val = floor_count(ratios.val);
  const std::size_t n_test = floor_count(ratios.test);
  const std::size_t n_train = n - n_val - n_test;
  SplitIndices s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
               order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  for (auto* part : {&s.train, &s.val, &s.test}) std::sort(part->begin(), part->end());
  if (s.val.empty() || s.test.empty()) {
    logger().warn("EmptyEvalSplit: {} samples give val={} test={}", n, s.val.size(), s.test.size());
  }
  return s;
}

DatasetSplit split_train_val_test(const GraphDataset& dataset, const SplitRatios& ratios,
                                  std::uint64_t seed) {
  const std::size_t n = enumerate_units(dataset).size();
  require(n > 0, ErrorCode::kEmptyDataset, "cannot split an empty dataset");
  DatasetSplit out;
  out.indices = split_indices(n, ratios, seed);
  out.train = select_units(dataset, out.indices.train, out.indices.train);
  out.val = select_units(dataset, out.indices.val, out.indices.train);
  out.test = select_units(dataset, out.indices.test, out.indices.train);
  return out;
}

Assignment lda_partition(std::span<const int> labels, std::size_t num_clients, double alpha,
                         std::uint64_t seed) {
  require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::kInvalidAlpha,
          "partition.alpha must be > 0");
  require_clients(labels.size(), num_clients);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(derive_seed(seed, "lda"));
  // Per-client lists in insertion order; rebalancing takes from the back.
  Assignment out(num_clients);
  for (auto& [label, members] : by_class) {
    rng.shuffle(members);
    const std::vector<double> p = rng.dirichlet(num_clients, alpha);
    const double n_k = static_cast<double>(members.size());
    std::size_t start = 0;
    double cumulative = 0.0;
    for (std::size_t j = 0; j < num_clients; ++j) {
      cumulative += p[j];
      std::size_t end = j + 1 == num_clients
                            ? members.size()
                            : static_cast<std::size_t>(std::llround(n_k * cumulative));
      end = std::clamp(end, start, members.size());
      out[j].insert(out[j].end(), members.begin() + static_cast<std::ptrdiff_t>(start),
                    members.begin() + static_cast<std::ptrdiff_t>(end));
      start = end;
    }
  }
  for (std::size_t j = 0; j < num_clients; ++j) {
    if (!out[j].empty()) continue;
    std::size_t largest = 0;
    for (std::size_t c = 1; c < num_clients; ++c)
      if (out[c].size() > out[largest].size()) largest = c;
    out[j].push_back(out[largest].back());
    out[largest].pop_back();
  }
  sort_clients(out);
  return out;
}

Assignment uniform_partition(std::size_t n, std::size_t num_clients, std::uint64_t seed) {
  require_clients(n, num_clients);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "uniform"));
  rng.shuffle(order);
  Assignment out(num_clients);
  for (std::size_t i = 0; i < n; ++i) out[i % num_clients].push_back(order[i]);
  sort_clients(out);
  return out;
}

Assignment metadata_partition(std::span<const std::optional<int>> categories,
                              std::size_t num_clients, std::uint64_t seed) {
  require(num_clients >= 1, ErrorCode::kInvalidCount, "num_clients must be >= 1");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    require(categories[i].has_value(), ErrorCode::kMissingCategory,
            "sample " + std::to_string(i) + " has no category");
    groups[*categories[i]].push_back(i);
  }
  std::vector<std::vector<std::size_t>*> order;
  for (auto& [cat, members] : groups) order.push_back(&members);
  Rng rng(derive_seed(seed, "metadata"));
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->size() > b->size(); });
  Assignment out(num_clients);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& dst = out[i % num_clients];
    dst.insert(dst.end(), order[i]->begin(), order[i]->end());
  }
  sort_clients(out);
  for (std::size_t j = 0; j < num_clients; ++j) {
    if (out[j].empty()) logger().warn("metadata partition left client {} empty", j);
  }
  return out;
}

GraphDataset sample_ego_networks(const GraphDataset& global, std::size_t num_egos, std::size_t k,
                                 std::uint64_t seed) {
  require(global.task == TaskType::kNodeClassification && global.graphs.size() == 1,
          ErrorCode::kSchemaViolation, "ego sampling needs a single node-classification graph");
  const Graph& g = global.graphs[0];
  require(num_egos <= g.num_nodes(), ErrorCode::kTooManyEgos,
          std::to_string(num_egos) + " egos from " + std::to_string(g.num_nodes()) + " nodes");
  std::vector<std::size_t> nodes(g.num_nodes());
  std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "egos"));
  rng.shuffle(nodes);
  nodes.resize(num_egos);
  std::sort(nodes.begin(), nodes.end());

  GraphDataset out = global.empty_like();
  out.graphs.reserve(num_egos);
  for (std::size_t center : nodes) {
    Graph ego = khop_ego(g, center, k);
    std::vector<int> labels(ego.num_nodes(), -1);
    labels[0] = (*g.node_labels())[center];
    out.graphs.push_back(ego.with_node_labels(std::move(labels)));
  }
  return out;
}

std::vector<int> unit_classes(const GraphDataset& dataset) {
  std::vector<int> out;
  if (dataset.task == TaskType::kLinkRegression || dataset.task == TaskType::kGraphRegression) {
    out.assign(enumerate_units(dataset).size(), 0);
    return out;
  }
  for (const Graph& g : dataset.graphs) {
    int cls = 0;
    if (dataset.task == TaskType::kGraphClassification) {
      const auto& y = *g.graph_label();
      if (y.size() == 1) {
        cls = !std::isnan(y[0]) && y[0] >= 0.5 ? 1 : 0;
      } else {
        double best = -1.0;
        for (std::size_t t = 0; t < y.size(); ++t) {
          if (!std::isnan(y[t]) && y[t] > best) {
            best = y[t];
            cls = static_cast<int>(t);
          }
        }
      }
    } else {
      std::map<int, std::size_t> counts;
      for (int v : *g.node_labels())
        if (v >= 0) ++counts[v];
      std::size_t best = 0;
      for (auto [label, count] : counts) {
        if (count > best) {
          best = count;
          cls = label;
        }
      }
    }
    out.push_back(cls);
  }
  return out;
}

std::vector<std::optional<int>> unit_categories(const GraphDataset& dataset) {
  std::vector<std::optional<int>> out;
  for (const Graph& g : dataset.graphs) {
    if (dataset.task != TaskType::kLinkRegression) {
      out.push_back(g.category());
      continue;
    }
    for (const EdgeLabel& l : g.edge_labels()) {
      if (g.node_categories() && (*g.node_categories())[l.dst] >= 0) {
        out.push_back((*g.node_categories())[l.dst]);
      } else {
        out.push_back(g.category());
      }
    }
  }
  return out;
}

GraphDataset select_units(const GraphDataset& dataset, std::span<const std::size_t> label_units,
                          std::span<const std::size_t> structure_units) {
  const std::vector<TrainingUnit> units = enumerate_units(dataset);
  GraphDataset out = dataset.empty_like();
  if (dataset.task != TaskType::kLinkRegression) {
    for (std::size_t u : label_units) {
      require(u < units.size(), ErrorCode::kIndexOutOfRange, "unit index");
      out.graphs.push_back(dataset.graphs[units[u].graph]);
    }
    return out;
  }
  std::map<std::size_t, std::vector<std::size_t>> labels_by_graph;
  for (std::size_t u : label_units) {
    require(u < units.size(), ErrorCode::kIndexOutOfRange, "unit index");
    labels_by_graph[units[u].graph].push_back(units[u].item);
  }
  std::set<std::pair<std::size_t, std::size_t>> kept_structure;
  for (std::size_t u : structure_units) {
    require(u < units.size(), ErrorCode::kIndexOutOfRange, "unit index");
    kept_structure.insert({units[u].graph, units[u].item});
  }
  for (auto& [gi, items] : labels_by_graph) {
    const Graph& g = dataset.graphs[gi];
    std::set<Edge> removed;
    for (std::size_t i = 0; i < g.edge_labels().size(); ++i) {
      if (kept_structure.count({gi, i})) continue;
      const EdgeLabel& l = g.edge_labels()[i];
      removed.insert({std::min(l.src, l.dst), std::max(l.src, l.dst)});
    }
    std::set<Edge> kept_labeled;
    for (std::size_t i = 0; i < g.edge_labels().size(); ++i) {
      if (!kept_structure.count({gi, i})) continue;
      const EdgeLabel& l = g.edge_labels()[i];
      kept_labeled.insert({std::min(l.src, l.dst), std::max(l.src, l.dst)});
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.undirected_edges()) {
      if (!removed.count(e) || kept_labeled.count(e)) edges.push_back(e);
    }
    std::vector<EdgeLabel> labels;
    for (std::size_t i : items) labels.push_back(g.edge_labels()[i]);
    out.graphs.push_back(g.with_edges(std::move(edges)).with_edge_labels(std::move(labels)));
  }
  return out;
}

std::string_view scheme_name(PartitionScheme scheme) {
  switch (scheme) {
    case PartitionScheme::kLda: return "lda";
    case PartitionScheme::kUniform: return "uniform";
    case PartitionScheme::kMetadata: return "metadata";
  }
  return "unknown";
}

PartitionScheme parse_scheme(std::string_view name) {
  if (name == "lda") return PartitionScheme::kLda;
  if (name == "uniform") return PartitionScheme::kUniform;
  if (name == "metadata") return PartitionScheme::kMetadata;
  fail(ErrorCode::kInvalidConfig, "partition.scheme: unknown value '" + std::string(name) + "'");
}

void PartitionSpec::validate() const {
  require(num_clients >= 1, ErrorCode::kInvalidCount, "partition.num_clients must be >= 1");
  if (scheme == PartitionScheme::kLda) {
    require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::kInvalidAlpha,
            "partition.alpha must be > 0");
  }
  ratios.validate();
}

Partitioned make_shards(const GraphDataset& dataset, const PartitionSpec& spec) {
  spec.validate();
  const std::size_t n = enumerate_units(dataset).size();
  require(n > 0, ErrorCode::kEmptyDataset, "dataset has no training units");
  const std::vector<int> classes = unit_classes(dataset);
  std::vector<std::optional<int>> categories;
  if (spec.scheme == PartitionScheme::kMetadata) categories = unit_categories(dataset);

  Partitioned out;
  ShardManifest& m = out.manifest;
  m.seed = spec.seed;
  m.scheme = spec.scheme;
  if (spec.scheme == PartitionScheme::kLda) m.alpha = spec.alpha;
  m.num_clients = spec.num_clients;
  m.global_split = spec.global_split;
  m.assignments.assign(spec.num_clients, {});
  m.splits.assign(spec.num_clients, {});

  if (!spec.global_split) {
    m.assignments = assign(spec, classes, categories, spec.seed);
    for (std::size_t k = 0; k < spec.num_clients; ++k) {
      const auto& owned = m.assignments[k];
      if (owned.empty()) continue;
      SplitIndices local = split_indices(owned.size(), spec.ratios,
                                         derive_seed(spec.seed, "split", k));
      m.splits[k] = {gather(owned, local.train), gather(owned, local.val),
                     gather(owned, local.test)};
    }
  } else {
    const SplitIndices global = split_indices(n, spec.ratios, derive_seed(spec.seed, "split"));
    const std::vector<std::size_t>* parts[] = {&global.train, &global.val, &global.test};
    for (int part = 0; part < 3; ++part) {
      const auto& members = *parts[part];
      if (members.empty()) continue;
      const auto sub_classes = pick<int>(classes, members);
      std::vector<std::optional<int>> sub_categories;
      if (!categories.empty()) sub_categories = pick<std::optional<int>>(categories, members);
      const Assignment local =
          members.size() >= spec.num_clients || spec.scheme == PartitionScheme::kMetadata
              ? assign(spec, sub_classes, sub_categories,
                       derive_seed(spec.seed, "global_part", static_cast<std::uint64_t>(part)))
              : uniform_partition(members.size(), std::min(members.size(), spec.num_clients),
                                  derive_seed(spec.seed, "global_part",
                                              static_cast<std::uint64_t>(part)));
      for (std::size_t k = 0; k < local.size(); ++k) {
        auto ids = gather(members, local[k]);
        auto& target = part == 0 ? m.splits[k].train : part == 1 ? m.splits[k].val : m.splits[k].test;
        target = ids;
        m.assignments[k].insert(m.assignments[k].end(), ids.begin(), ids.end());
      }
    }
    sort_clients(m.assignments);
  }

  out.shards.reserve(spec.num_clients);
  for (std::size_t k = 0; k < spec.num_clients; ++k) {
    const SplitIndices& s = m.splits[k];
    ClientShard shard;
    shard.client_id = k;
    shard.train = select_units(dataset, s.train, s.train);
    shard.val = select_units(dataset, s.val, s.train);
    shard.test = select_units(dataset, s.test, s.train);
    shard.num_train_samples = s.train.size();
    if (shard.num_train_samples == 0) logger().warn("client {} has no training samples", k);
    out.shards.push_back(std::move(shard));
  }
  return out;
}

std::string manifest_to_json(const ShardManifest& m) {
  Json j;
  j["seed"] = m.seed;
  j["scheme"] = std::string(scheme_name(m.scheme));
  if (m.alpha) j["alpha"] = *m.alpha;
  j["num_clients"] = m.num_clients;
  j["global_split"] = m.global_split;
  Json assignments = Json::array();
  for (const auto& a : m.assignments) assignments.push_back(indices_json(a));
  j["assignments"] = std::move(assignments);
  Json splits = Json::array();
  for (const auto& s : m.splits) {
    splits.push_back(Json{{"train", s.train}, {"val", s.val}, {"test", s.test}});
  }
  j["split_indices"] = std::move(splits);
  return j.dump() + "\n";
}

ShardManifest manifest_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, std::string("manifest: ") + e.what());
  }
  try {
    ShardManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (j.contains("alpha")) m.alpha = j.at("alpha").get<double>();
    m.num_clients = j.at("num_clients").get<std::size_t>();
    m.global_split = j.value("global_split", false);
    m.assignments = j.at("assignments").get<Assignment>();
    for (const auto& s : j.at("split_indices")) {
      m.splits.push_back({s.at("train").get<std::vector<std::size_t>>(),
                          s.at("val").get<std::vector<std::size_t>>(),
                          s.at("test").get<std::vector<std::size_t>>()});
    }
    require(m.assignments.size() == m.num_clients && m.splits.size() == m.num_clients,
            ErrorCode::kSchemaViolation, "manifest: client count mismatch");
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchemaViolation, std::string("manifest: ") + e.what());
  }
}

std::vector<std::vector<std::size_t>> class_histogram(std::span<const int> classes,
                                                      const Assignment& assignment) {
  int max_class = 0;
  for (int c : classes) max_class = std::max(max_class, c);
  std::vector<std::vector<std::size_t>> out(
      assignment.size(), std::vector<std::size_t>(static_cast<std::size_t>(max_class) + 1, 0));
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    for (std::size_t i : assignment[j]) {
      require(i < classes.size(), ErrorCode::kIndexOutOfRange, "assignment index");
      if (classes[i] >= 0) ++out[j][static_cast<std::size_t>(classes[i])];
    }
  }
  return out;
}

}  // namespace fedgraph
