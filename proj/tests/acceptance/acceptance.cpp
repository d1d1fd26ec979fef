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

// Acceptance run: one PASS/FAIL line per criterion.
//
//   fedgraph_acceptance [--only 1,2,...] [--cli PATH] [--cora-dir DIR]
//
// Exit status is 0 when every selected criterion passes.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedgraph/cli/config.hpp"
#include "fedgraph/common/error.hpp"
#include "fedgraph/common/rng.hpp"
#include "fedgraph/fl/engine.hpp"
#include "fedgraph/fl/report.hpp"
#include "fedgraph/fl/runner.hpp"
#include "fedgraph/gnn/layers.hpp"
#include "fedgraph/gnn/model.hpp"
#include "fedgraph/io/dataset_io.hpp"
#include "fedgraph/io/synthetic.hpp"
#include "fedgraph/partition/partition.hpp"
#include "fedgraph/secure/field.hpp"
#include "fedgraph/secure/secure_agg.hpp"
#include "fedgraph/secure/shamir.hpp"

namespace fedgraph {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness

constexpr double kFdStep = 1e-5;
constexpr double kGradTol = 1e-4;

DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  DenseMatrix m(r, c);
  for (double& v : m.values()) v = 2.0 * rng.uniform() - 1.0;
  return m;
}

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

Graph random_graph(Rng& rng, std::size_t feature_dim, std::optional<TaskType> task = std::nullopt) {
  GraphInput in;
  in.num_nodes = 4 + rng.uniform_index(7);
  for (std::size_t u = 0; u < in.num_nodes; ++u)
    for (std::size_t v = u + 1; v < in.num_nodes; ++v)
      if (rng.uniform() < 0.35) in.edges.emplace_back(u, v);
  in.node_features = random_matrix(in.num_nodes, feature_dim, rng);
  if (task == TaskType::kGraphClassification) in.graph_label = std::vector<double>{1.0, 0.0};
  if (task == TaskType::kNodeClassification) {
    std::vector<int> labels(in.num_nodes);
    for (int& y : labels) y = static_cast<int>(rng.uniform_index(2));
    in.node_labels = labels;
  }
  return build_graph(std::move(in));
}

// max over coordinates of |a - n| / max(1, |a| + |n|) with central
// differences of f around x.
double fd_error(std::span<double> x, std::span<const double> analytic, const std::function<double()>& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kFdStep;
    const double up = f();
    x[i] = saved - kFdStep;
    const double down = f();
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * kFdStep);
    worst = std::max(worst, std::abs(analytic[i] - numeric) /
                                std::max(1.0, std::abs(analytic[i]) + std::abs(numeric)));
  }
  return worst;
}

double probe_dot(const DenseMatrix& probe, const DenseMatrix& out) {
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) acc += probe.values()[i] * out.values()[i];
  return acc;
}

Outcome criterion_gradients() {
  const auto start = Clock::now();
  constexpr int kGraphs = 20;
  std::map<std::string, double> worst;
  Rng rng(20261);
  const Activation act = Activation::leaky_relu(0.2);
  for (int g = 0; g < kGraphs; ++g) {
    const Graph graph = random_graph(rng, 3);
    const std::size_t n = graph.num_nodes();
    DenseMatrix h = random_matrix(n, 3, rng);
    {
      const SparseMatrix a = normalize_adjacency(graph);
      DenseMatrix w = random_matrix(3, 4, rng);
      std::vector<double> b = random_vector(4, rng);
      const DenseMatrix probe = random_matrix(n, 4, rng);
      GcnCache cache;
      gcn_layer(h, a, w, b, act, &cache);
      const LayerGrad grad = gcn_layer_backward(h, a, w, act, cache, probe);
      auto f = [&] { return probe_dot(probe, gcn_layer(h, a, w, b, act)); };
      double e = std::max({fd_error(h.values(), grad.d_input.values(), f),
                           fd_error(w.values(), grad.d_weights[0].values(), f), fd_error(b, grad.d_bias, f)});
      worst["gcn_layer"] = std::max(worst["gcn_layer"], e);
    }
    {
      const SparseMatrix m = mean_aggregator(graph);
      DenseMatrix ws = random_matrix(3, 4, rng), wn = random_matrix(3, 4, rng);
      std::vector<double> b = random_vector(4, rng);
      const DenseMatrix probe = random_matrix(n, 4, rng);
      SageCache cache;
      sage_layer(h, m, ws, wn, b, act, &cache);
      const LayerGrad grad = sage_layer_backward(h, m, ws, wn, act, cache, probe);
      auto f = [&] { return probe_dot(probe, sage_layer(h, m, ws, wn, b, act)); };
      double e = std::max({fd_error(h.values(), grad.d_input.values(), f),
                           fd_error(ws.values(), grad.d_weights[0].values(), f),
                           fd_error(wn.values(), grad.d_weights[1].values(), f), fd_error(b, grad.d_bias, f)});
      worst["sage_layer"] = std::max(worst["sage_layer"], e);
    }
    for (HeadCombine combine : {HeadCombine::kConcat, HeadCombine::kMean}) {
      const SparseMatrix s = self_loop_structure(graph);
      std::vector<GatHead> heads;
      for (int k = 0; k < 2; ++k) heads.push_back({random_matrix(3, 2, rng), random_vector(2, rng), random_vector(2, rng)});
      const std::size_t width = combine == HeadCombine::kConcat ? 4 : 2;
      const DenseMatrix probe = random_matrix(n, width, rng);
      GatCache cache;
      gat_layer(h, s, heads, 0.2, combine, act, &cache);
      const GatGrad grad = gat_layer_backward(h, s, heads, 0.2, combine, act, cache, probe);
      auto f = [&] { return probe_dot(probe, gat_layer(h, s, heads, 0.2, combine, act)); };
      double e = fd_error(h.values(), grad.d_input.values(), f);
      for (std::size_t k = 0; k < heads.size(); ++k) {
        e = std::max({e, fd_error(heads[k].w.values(), grad.heads[k].d_w.values(), f),
                      fd_error(heads[k].att_src, grad.heads[k].d_att_src, f),
                      fd_error(heads[k].att_dst, grad.heads[k].d_att_dst, f)});
      }
      const std::string name = combine == HeadCombine::kConcat ? "gat_layer_concat" : "gat_layer_mean";
      worst[name] = std::max(worst[name], e);
    }
  }
  for (ModelKind kind : {ModelKind::kGcn, ModelKind::kSage, ModelKind::kGat, ModelKind::kSgc}) {
    for (TaskType task : {TaskType::kGraphClassification, TaskType::kNodeClassification}) {
      ModelConfig c;
      c.model = kind;
      c.task = task;
      c.hidden_dim = 6;
      c.node_embedding_dim = 4;
      c.readout_dim = 5;
      c.graph_embedding_dim = 4;
      c.attention_heads = 2;
      c.dropout = 0.0;
      const GnnModel model(c, 3, 2);
      const std::string name = std::string(model_name(kind)) + "_model_" +
                               (task == TaskType::kGraphClassification ? "graph" : "node");
      for (int g = 0; g < kGraphs; ++g) {
        const Graph graph = random_graph(rng, 3, task);
        ParamVector params = model.initial_params(static_cast<std::uint64_t>(g) + 1);
        for (double& v : params.values()) v += 0.3 * (2.0 * rng.uniform() - 1.0);
        ParamVector grad;
        model.loss_and_gradient(params, graph, TrainingUnit{0, 0}, nullptr, &grad);
        auto f = [&] {
          ParamVector scratch;
          return model.loss_and_gradient(params, graph, TrainingUnit{0, 0}, nullptr, &scratch);
        };
        worst[name] = std::max(worst[name], fd_error(params.values(), grad.values(), f));
      }
    }
  }
  double overall = 0.0;
  std::string culprit;
  for (const auto& [name, e] : worst) {
    if (e >= overall) {
      overall = e;
      culprit = name;
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = overall < kGradTol && secs < 60.0;
  o.detail = std::to_string(worst.size()) + " checks x 20 graphs, worst rel err " + fmt("%.2e", overall) +
             " (" + culprit + "), " + fmt("%.1f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// Shared motif setup

struct MotifRun {
  std::vector<ClientShard> shards;
  ModelConfig model;
  FLConfig fl;
};

MotifRun motif_run(std::size_t graphs, std::uint64_t data_seed, std::size_t clients, PartitionScheme scheme,
                   double alpha, std::uint64_t seed) {
  MotifParams mp;
  mp.num_graphs = graphs;
  const GraphDataset data = gen_motif_graph(mp, data_seed);
  PartitionSpec spec;
  spec.scheme = scheme;
  spec.alpha = alpha;
  spec.num_clients = clients;
  spec.seed = seed;
  MotifRun r;
  r.shards = make_shards(data, spec).shards;
  r.model.hidden_dim = 16;
  r.model.node_embedding_dim = 16;
  r.model.readout_dim = 16;
  r.model.graph_embedding_dim = 16;
  r.fl.num_clients = clients;
  r.fl.seed = seed;
  r.fl.metric = EvalMetric::kAccuracy;
  r.fl.eval_frequency = 1;
  r.fl.optimizer.learning_rate = 0.001;
  return r;
}

// ---------------------------------------------------------------------------
// 2. FedAvg reduction

Outcome criterion_fedavg_reduction() {
  MotifRun r = motif_run(120, 7, 1, PartitionScheme::kUniform, 0.5, 13);
  std::size_t exact = 0;
  for (std::size_t rounds = 1; rounds <= 3; ++rounds) {
    r.fl.rounds = rounds;
    const TrainingReport fed = run_training(r.shards, r.model, r.fl, TransportKind::kMemory);
    const TrainingReport cen = train_centralized(r.shards[0], r.model, r.fl);
    bool same = fed.final_params == cen.final_params && fed.rounds.size() == cen.rounds.size();
    for (std::size_t i = 0; same && i < fed.rounds.size(); ++i) {
      same = std::bit_cast<std::uint64_t>(fed.rounds[i].mean_train_loss) ==
                 std::bit_cast<std::uint64_t>(cen.rounds[i].mean_train_loss) &&
             fed.rounds[i].test_metric == cen.rounds[i].test_metric;
    }
    exact += same;
  }
  return {exact == 3, std::to_string(exact) + "/3 round prefixes bit-identical (params, losses, metrics)"};
}

// ---------------------------------------------------------------------------
// 3. Aggregation oracle

Outcome criterion_aggregation() {
  Rng rng(303);
  double worst = 0.0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t k = 1 + rng.uniform_index(8);
    const std::size_t dim = 1 + rng.uniform_index(40);
    std::vector<ClientUpdate> updates;
    for (std::size_t i = 0; i < k; ++i) {
      ClientUpdate u;
      u.client_id = k - 1 - i;  // out of order on purpose
      u.num_samples = 1 + rng.uniform_index(500);
      ParamLayout layout;
      layout.add("w", 1, dim);
      u.params = ParamVector(layout);
      for (double& v : u.params.values()) v = 2.0 * rng.uniform() - 1.0;
      updates.push_back(std::move(u));
    }
    const ParamVector got = aggregate_fedavg(updates);
    // Oracle: extended-precision sum of n_k x_k over the sample total.
    long double total = 0.0L;
    for (const auto& u : updates) total += static_cast<long double>(u.num_samples);
    for (std::size_t c = 0; c < dim; ++c) {
      long double acc = 0.0L;
      for (const auto& u : updates) acc += static_cast<long double>(u.num_samples) * u.params.values()[c];
      worst = std::max(worst, static_cast<double>(std::abs(acc / total - got.values()[c])));
    }
  }
  ParamLayout two;
  two.add("w", 1, 2);
  ClientUpdate a{0, ParamVector(two, {1.0, 3.0}), 2, 0.0};
  ClientUpdate b{1, ParamVector(two, {5.0, 7.0}), 6, 0.0};
  const std::vector<ClientUpdate> ex = {a, b};
  const ParamVector v = aggregate_fedavg(ex);
  const bool example = v.values()[0] == 4.0 && v.values()[1] == 6.0;
  return {worst <= 1e-15 && example,
          "100 random sets, worst L_inf " + fmt("%.2e", worst) + "; [(2,[1,3]),(6,[5,7])] -> [" +
              format_double(v.values()[0]) + "," + format_double(v.values()[1]) + "]"};
}

// ---------------------------------------------------------------------------
// CLI helper

struct CliResult {
  int code = -1;
  std::string err;
};

CliResult run_cli_binary(const std::string& cli, const std::string& args, const fs::path& cwd) {
  const fs::path err = cwd / ".stderr";
  const std::string cmd = "cd '" + cwd.string() + "' && '" + cli + "' " + args + " >/dev/null 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fedgraph_acceptance_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json motif_config_doc() {
  return ordered_json::parse(R"({
    "data": {"synthetic": {"kind": "motif_graph", "num_graphs": 120, "seed": 7}},
    "partition": {"scheme": "uniform", "seed": 13},
    "model": {"hidden_dim": 16, "node_embedding_dim": 16, "readout_dim": 16, "graph_embedding_dim": 16},
    "fl": {"num_clients": 4, "rounds": 4, "eval_frequency": 2, "seed": 13, "metric": "accuracy",
           "optimizer": {"learning_rate": 0.001}},
    "output_dir": "out"
  })");
}

// ---------------------------------------------------------------------------
// 4. Secure aggregation correctness

double linf(const ParamVector& a, const ParamVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

Outcome criterion_secure(const std::string& cli) {
  MotifRun r = motif_run(160, 7, 4, PartitionScheme::kUniform, 0.5, 21);
  r.fl.rounds = 5;
  SecureOptions sec;
  sec.threshold = 3;
  sec.scale_bits = 24;
  const TrainingReport plain = run_training(r.shards, r.model, r.fl, TransportKind::kMemory);
  const TrainingReport secure = run_training(r.shards, r.model, r.fl, TransportKind::kMemory, sec);
  const double d0 = linf(plain.final_params, secure.final_params);

  r.fl.dropouts = {DropoutEvent{3, 2, DropStage::kBeforeUpload}};
  const TrainingReport plain_drop = run_training(r.shards, r.model, r.fl, TransportKind::kMemory);
  const TrainingReport secure_drop = run_training(r.shards, r.model, r.fl, TransportKind::kMemory, sec);
  const double d1 = linf(plain_drop.final_params, secure_drop.final_params);
  // A late dropper already uploaded, so U1 still holds all four clients and
  // the plain reference is the full-participation run.
  r.fl.dropouts = {DropoutEvent{2, 1, DropStage::kBeforeAggregateShare}};
  const TrainingReport secure_late = run_training(r.shards, r.model, r.fl, TransportKind::kMemory, sec);
  const double d2 = linf(plain.final_params, secure_late.final_params);
  const bool late_counted = secure_late.rounds.at(1).participants == 4;

  const fs::path dir = scratch("c4");
  ordered_json doc = motif_config_doc();
  doc["secure"] = {{"threshold", 3}, {"scale_bits", 24}};
  doc["fl"]["dropouts"] = {{{"round", 2}, {"client", 0}}, {{"round", 2}, {"client", 3}}};
  std::ofstream(dir / "run.json") << doc.dump(2);
  const CliResult mem = run_cli_binary(cli, "train --config run.json", dir);
  const CliResult tcp = run_cli_binary(cli, "train --config run.json --transport tcp", dir);

  const bool ok = d0 <= 1e-4 && d1 <= 1e-4 && d2 <= 1e-4 && late_counted && mem.code == 4 && tcp.code == 4;
  return {ok, "L_inf no dropout " + fmt("%.2e", d0) + ", upload dropout " + fmt("%.2e", d1) +
                  ", late dropout " + fmt("%.2e", d2) +
                  (late_counted ? " (U1 = 4)" : " (U1 != 4)") + "; 2 of 4 survivors -> exit " +
                  std::to_string(mem.code) + " (memory), " + std::to_string(tcp.code) + " (tcp)"};
}

// ---------------------------------------------------------------------------
// 5. Secure aggregation privacy

Outcome criterion_privacy() {
  const PrimeField f(7);
  bool hiding = true;
  std::size_t views_checked = 0;
  for (std::size_t t : {2u, 3u, 4u}) {
    const std::size_t n = 4;
    std::size_t combos = 1;
    for (std::size_t k = 0; k + 1 < t; ++k) combos *= 7;
    // For every (t-1)-subset of holders, the view distribution must not
    // depend on the secret.
    std::vector<std::size_t> subset(t - 1);
    std::function<void(std::size_t, std::size_t)> each = [&](std::size_t from, std::size_t depth) {
      if (depth == subset.size()) {
        std::map<std::vector<std::uint64_t>, std::array<int, 7>> tally;
        for (std::uint64_t secret = 0; secret < 7; ++secret) {
          for (std::size_t code = 0; code < combos; ++code) {
            std::vector<FieldVector> coeff(t - 1, FieldVector(1));
            std::size_t rest = code;
            for (auto& c : coeff) {
              c[0] = rest % 7;
              rest /= 7;
            }
            const FieldVector s = {secret};
            const auto shares = shamir_share_with(s, n, coeff, f);
            std::vector<std::uint64_t> view;
            for (std::size_t j : subset) view.push_back(shares[j].values[0]);
            ++tally[view][secret];
          }
        }
        for (const auto& [view, per] : tally) {
          for (int c : per) hiding = hiding && c == per[0];
        }
        hiding = hiding && tally.size() == combos;
        ++views_checked;
        return;
      }
      for (std::size_t j = from; j < n; ++j) {
        subset[depth] = j;
        each(j + 1, depth + 1);
      }
    };
    each(0, 0);
  }

  SAConfig c;
  c.seed = 2026;
  const std::size_t dim = 100000;
  SecAggClient client(c, 2, 1, dim);
  std::vector<double> w(dim);
  Rng rng(5);
  for (double& v : w) v = rng.normal();
  const FieldVector masked = client.masked_upload(w, 11);
  std::array<double, 16> bins{};
  for (std::uint64_t v : masked) {
    bins[static_cast<std::size_t>(static_cast<unsigned __int128>(v) * 16 / kMersenne61)] += 1.0;
  }
  double chi = 0.0;
  for (double b : bins) chi += (b - dim / 16.0) * (b - dim / 16.0) / (dim / 16.0);
  const double critical = 30.578;  // chi-square, 15 dof, upper 0.01
  return {hiding && chi < critical,
          "Shamir T-1 hiding over " + std::to_string(views_checked) + " subsets at p=7 " +
              (hiding ? "holds" : "VIOLATED") + "; masked upload chi2 " + fmt("%.2f", chi) + " < " +
              fmt("%.3f", critical)};
}

// ---------------------------------------------------------------------------
// 6. Partition statistics

double mean_max_share(const std::vector<int>& labels, std::size_t clients, double alpha, std::uint64_t seed) {
  const Assignment a = lda_partition(labels, clients, alpha, seed);
  const auto hist = class_histogram(labels, a);
  double acc = 0.0;
  for (const auto& row : hist) {
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    acc += *std::max_element(row.begin(), row.end()) / total;
  }
  return acc / static_cast<double>(hist.size());
}

Outcome criterion_partition() {
  const std::vector<double> alphas = {0.1, 1.0, 10.0, 1000.0};
  std::vector<int> labels(1000);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 5);
  bool monotone = true;
  std::ostringstream means;
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> m;
    for (double alpha : alphas) {
      double acc = 0.0;
      for (int s = 0; s < 20; ++s) {
        acc += mean_max_share(labels, 10, alpha, static_cast<std::uint64_t>(rep * 1000 + s));
      }
      m.push_back(acc / 20.0);
    }
    for (std::size_t i = 1; i < m.size(); ++i) monotone = monotone && m[i] <= m[i - 1];
    if (rep == 0) {
      for (std::size_t i = 0; i < m.size(); ++i) means << (i ? "/" : "") << fmt("%.3f", m[i]);
    }
  }
  // TV between each client's class distribution and the global one (uniform over 5).
  double worst_tv = 0.0;
  for (std::size_t clients : {2u, 4u, 10u}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      for (const auto& row : class_histogram(labels, lda_partition(labels, clients, 1e6, s))) {
        const double total = std::accumulate(row.begin(), row.end(), 0.0);
        double tv = 0.0;
        for (std::size_t c : row) tv += 0.5 * std::abs(c / total - 0.2);
        worst_tv = std::max(worst_tv, tv);
      }
    }
  }
  return {monotone && worst_tv < 0.05,
          "mean max-class share over alpha 0.1/1/10/1000 = " + means.str() +
              (monotone ? " (non-increasing in 3 reps of 20 seeds)" : " (NOT monotone)") +
              "; alpha=1e6 worst client TV " + fmt("%.4f", worst_tv)};
}

// ---------------------------------------------------------------------------
// 7. Desk-scale learning, graph level

struct LearningSetup {
  GraphDataset data;
  ModelConfig model;
  FLConfig fl;
};

LearningSetup learning_setup(std::uint64_t seed) {
  LearningSetup s;
  MotifParams mp;
  mp.num_graphs = 600;
  s.data = gen_motif_graph(mp, 600 + seed);
  s.model.model = ModelKind::kGcn;  // 2 layers, width 64, dropout 0.3
  s.fl.rounds = 100;
  s.fl.eval_frequency = 10;
  s.fl.seed = seed;
  s.fl.metric = EvalMetric::kAccuracy;
  s.fl.optimizer.learning_rate = 0.0005;
  return s;
}

double federated_accuracy(const LearningSetup& s, PartitionScheme scheme, double alpha) {
  PartitionSpec spec;
  spec.scheme = scheme;
  spec.alpha = alpha;
  spec.num_clients = 4;
  spec.seed = s.fl.seed;
  FLConfig fl = s.fl;
  fl.num_clients = 4;
  const TrainingReport r = run_training(make_shards(s.data, spec).shards, s.model, fl, TransportKind::kMemory);
  return r.final_test_metric.value_or(std::nan(""));
}

Outcome criterion_learning() {
  const auto start = Clock::now();
  double central = 0.0, uniform_mean = 0.0, lda_mean = 0.0, uniform_seed0 = 0.0;
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  for (std::uint64_t seed : seeds) {
    const LearningSetup s = learning_setup(seed);
    const double u = federated_accuracy(s, PartitionScheme::kUniform, 0.5);
    const double l = federated_accuracy(s, PartitionScheme::kLda, 0.1);
    uniform_mean += u / 3.0;
    lda_mean += l / 3.0;
    if (seed == seeds[0]) {
      uniform_seed0 = u;
      PartitionSpec one;
      one.num_clients = 1;
      one.seed = seed;
      central = train_centralized(make_shards(s.data, one).shards[0], s.model, s.fl)
                    .final_test_metric.value_or(std::nan(""));
    }
  }
  const bool ok = central >= 0.90 && std::abs(uniform_seed0 - central) <= 0.05 && lda_mean <= uniform_mean + 0.01;
  return {ok, "centralized " + fmt("%.4f", central) + " (>= 0.90), FedAvg uniform " + fmt("%.4f", uniform_seed0) +
                  " (|diff| " + fmt("%.4f", std::abs(uniform_seed0 - central)) + " <= 0.05); 3-seed means: LDA(0.1) " +
                  fmt("%.4f", lda_mean) + " vs uniform " + fmt("%.4f", uniform_mean) + " (+0.01); " +
                  fmt("%.0f", seconds_since(start)) + " s"};
}

// ---------------------------------------------------------------------------
// 8. Desk-scale learning, node level (Cora)

Outcome criterion_cora(const std::string& cora_dir) {
  if (cora_dir.empty()) return {false, "Cora not available: set FEDGRAPH_CORA_DIR or --cora-dir to cora.content/cora.cites"};
  if (!fs::exists(cora_dir)) return {false, "Cora directory " + cora_dir + " does not exist"};
  const auto start = Clock::now();
  const LoadResult loaded = load_dataset(cora_dir, DatasetFormat::kPlanetoid);
  const GraphDataset egos = sample_ego_networks(loaded.dataset, 1000, 2, 8);
  const std::vector<double> grid = {0.00015, 0.0015, 0.015, 0.15};
  ModelConfig model;  // library defaults
  model.model = ModelKind::kGcn;
  model.task = TaskType::kNodeClassification;
  struct Best {
    double val = -1.0, test = 0.0, lr = 0.0;
  };
  Best central, federated;
  PartitionSpec one;
  one.num_clients = 1;
  one.seed = 8;
  const ClientShard pooled = make_shards(egos, one).shards[0];
  PartitionSpec ten;
  ten.scheme = PartitionScheme::kLda;  // LDA on the ego label
  ten.alpha = 0.5;
  ten.num_clients = 10;
  ten.seed = 8;
  const auto shards = make_shards(egos, ten).shards;
  for (double lr : grid) {
    FLConfig fl;
    fl.rounds = 50;
    fl.eval_frequency = 50;
    fl.seed = 8;
    fl.metric = EvalMetric::kMicroF1;
    fl.optimizer.learning_rate = lr;
    const TrainingReport c = train_centralized(pooled, model, fl);
    if (c.final_val_metric.value_or(-1.0) > central.val) central = {*c.final_val_metric, *c.final_test_metric, lr};
    fl.num_clients = 10;
    const TrainingReport f = run_training(shards, model, fl, TransportKind::kMemory);
    if (f.final_val_metric.value_or(-1.0) > federated.val) federated = {*f.final_val_metric, *f.final_test_metric, lr};
  }
  const bool ok = central.test >= 0.80 && std::abs(federated.test - central.test) <= 0.05;
  return {ok, "dropped edges " + std::to_string(loaded.dropped_edges) + "; centralized micro-F1 " +
                  fmt("%.4f", central.test) + " (lr " + fmt("%g", central.lr) + "), FedAvg " +
                  fmt("%.4f", federated.test) + " (lr " + fmt("%g", federated.lr) + "); " + fmt("%.0f", seconds_since(start)) + " s"};
}

// ---------------------------------------------------------------------------
// 9. Transport equivalence

Outcome criterion_transport(const std::string& cli) {
  const auto start = Clock::now();
  MotifRun r = motif_run(200, 9, 4, PartitionScheme::kLda, 1.0, 31);
  r.fl.rounds = 10;
  r.fl.eval_frequency = 2;
  const TrainingReport mem = run_training(r.shards, r.model, r.fl, TransportKind::kMemory);
  const TrainingReport tcp = run_training(r.shards, r.model, r.fl, TransportKind::kTcp);
  SecureOptions sec;
  const TrainingReport mem_s = run_training(r.shards, r.model, r.fl, TransportKind::kMemory, sec);
  const TrainingReport tcp_s = run_training(r.shards, r.model, r.fl, TransportKind::kTcp, sec);
  const bool in_process = report_to_json(mem) == report_to_json(tcp) && mem.final_params == tcp.final_params &&
                          report_to_json(mem_s) == report_to_json(tcp_s) && mem_s.final_params == tcp_s.final_params;
  const double lib_secs = seconds_since(start);

  const fs::path dir = scratch("c9");
  ordered_json doc = motif_config_doc();
  doc["fl"]["rounds"] = 10;
  std::ofstream(dir / "run.json") << doc.dump(2);
  const auto cli_start = Clock::now();
  const CliResult a = run_cli_binary(cli, "train --config run.json --output-dir mem", dir);
  const CliResult b = run_cli_binary(cli, "train --config run.json --transport tcp --output-dir tcp", dir);
  const double tcp_secs = seconds_since(cli_start);
  bool processes = a.code == 0 && b.code == 0;
  for (const char* f : {"report.json", "report.csv", "model.bin"}) {
    processes = processes && slurp(dir / "mem" / f) == slurp(dir / "tcp" / f);
  }
  return {in_process && processes && lib_secs < 300.0,
          std::string("threads: plain+secure reports ") + (in_process ? "identical" : "DIFFER") +
              "; processes: report.json/csv/model.bin " + (processes ? "identical" : "DIFFER") +
              "; 4-client 10-round runs " + fmt("%.1f", lib_secs) + " s + " + fmt("%.1f", tcp_secs) + " s"};
}

// ---------------------------------------------------------------------------
// 10. Determinism of every command

Outcome criterion_determinism(const std::string& cli) {
  const fs::path dir = scratch("c10");
  ordered_json doc = motif_config_doc();
  doc["data"] = {{"path", "data.json"}};
  std::ofstream(dir / "run.json") << doc.dump(2);
  std::ofstream(dir / "grid.json")
      << R"({"base": "run.json", "grid": {"fl.optimizer.learning_rate": [0.00015, 0.0015], "model.hidden_dim": [8, 16]}})";
  struct Step {
    std::string name;
    std::string args_a, args_b;
    std::vector<std::pair<fs::path, fs::path>> files;
  };
  std::vector<Step> steps = {
      {"gen-data", "gen-data --kind motif --graphs 120 --seed 4 --out data.json",
       "gen-data --kind motif --graphs 120 --seed 4 --out data_b.json", {{"data.json", "data_b.json"}}},
      {"partition", "partition --input data.json --clients 4 --scheme lda --alpha 0.5 --seed 7 --out-dir pa",
       "partition --input data.json --clients 4 --scheme lda --alpha 0.5 --seed 7 --out-dir pb", {}},
      {"train", "train --config run.json --output-dir ta", "train --config run.json --output-dir tb", {}},
      {"train --secure", "train --config run.json --secure --output-dir sa",
       "train --config run.json --secure --output-dir sb", {}},
      {"train --centralized", "train --config run.json --centralized --output-dir ca",
       "train --config run.json --centralized --output-dir cb", {}},
      {"train tcp", "train --config run.json --transport tcp --output-dir xa",
       "train --config run.json --transport tcp --output-dir xb", {}},
      {"sweep", "sweep --grid grid.json --out-dir wa", "sweep --grid grid.json --out-dir wb", {}},
  };
  auto pair_dirs = [&](const std::string& a, const std::string& b, Step& s) {
    for (const auto& e : fs::recursive_directory_iterator(dir / a)) {
      if (!e.is_regular_file()) continue;
      const fs::path rel = fs::relative(e.path(), dir / a);
      const std::string name = rel.filename().string();
      // Wall-clock lives only in timing files.
      if (name == "timing.json" || name == "leaderboard_timing.csv") continue;
      s.files.emplace_back(fs::path(a) / rel, fs::path(b) / rel);
    }
  };
  std::vector<std::string> failed;
  std::size_t compared = 0;
  for (Step& s : steps) {
    const CliResult a = run_cli_binary(cli, s.args_a, dir);
    const CliResult b = run_cli_binary(cli, s.args_b, dir);
    if (a.code != 0 || b.code != 0) {
      failed.push_back(s.name + " (exit " + std::to_string(a.code) + "/" + std::to_string(b.code) + ")");
      continue;
    }
    const std::string base_a = s.args_a.substr(s.args_a.rfind(' ') + 1);
    const std::string base_b = s.args_b.substr(s.args_b.rfind(' ') + 1);
    if (s.files.empty()) pair_dirs(base_a, base_b, s);
    for (const auto& [fa, fb] : s.files) {
      ++compared;
      if (slurp(dir / fa) != slurp(dir / fb)) failed.push_back(s.name + ":" + fa.string());
    }
  }
  std::string detail = std::to_string(steps.size()) + " commands, " + std::to_string(compared) + " output files compared";
  if (!failed.empty()) {
    detail += "; differing:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty() && compared > 0, detail};
}

}  // namespace
}  // namespace fedgraph

int main(int argc, char** argv) {
  using namespace fedgraph;
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::string cli = FEDGRAPH_CLI;
  std::string cora = std::getenv("FEDGRAPH_CORA_DIR") ? std::getenv("FEDGRAPH_CORA_DIR") : "";
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--cli", cli, "fedgraph executable");
  app.add_option("--cora-dir", cora, "Directory with cora.content and cora.cites");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient correctness", criterion_gradients},
      {"FedAvg reduction", criterion_fedavg_reduction},
      {"aggregation oracle", criterion_aggregation},
      {"secure aggregation correctness", [&] { return criterion_secure(cli); }},
      {"secure aggregation privacy", criterion_privacy},
      {"partition statistics", criterion_partition},
      {"graph-level learning", criterion_learning},
      {"node-level learning (Cora)", [&] { return criterion_cora(cora); }},
      {"transport equivalence", [&] { return criterion_transport(cli); }},
      {"determinism", [&] { return criterion_determinism(cli); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " - "
              << o.detail << std::endl;
  }
  std::filesystem::remove_all(std::filesystem::temp_directory_path() /
                              ("fedgraph_acceptance_" + std::to_string(::getpid())));
  return all ? 0 : 1;
}
