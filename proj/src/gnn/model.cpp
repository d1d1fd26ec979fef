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

#include "fedgraph/gnn/model.hpp"

#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"
#include "fedgraph/gnn/layers.hpp"
#include "fedgraph/gnn/loss.hpp"
#include "fedgraph/ndmath/ops.hpp"

namespace fedgraph {
namespace {

std::string layer_prefix(std::size_t l) { return "gnn." + std::to_string(l) + "."; }
std::string head_prefix(std::size_t l, std::size_t h) {
  return layer_prefix(l) + "head" + std::to_string(h) + ".";
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

Mlp load_mlp(const ParamVector& p) {
  const auto& L = p.layout();
  return Mlp{p.matrix(L.index_of("readout.w1")), to_vector(p.segment(L.index_of("readout.b1"))),
             p.matrix(L.index_of("readout.w2")), to_vector(p.segment(L.index_of("readout.b2")))};
}

void store_mlp_grad(const MlpGrad& g, ParamVector* grad) {
  const auto& L = grad->layout();
  grad->accumulate(L.index_of("readout.w1"), g.d_w1.values());
  grad->accumulate(L.index_of("readout.b1"), g.d_b1);
  grad->accumulate(L.index_of("readout.w2"), g.d_w2.values());
  grad->accumulate(L.index_of("readout.b2"), g.d_b2);
}

LossResult unit_loss(TaskType task, const DenseMatrix& prediction, const Graph& graph,
                     TrainingUnit unit) {
  switch (task) {
    case TaskType::kGraphClassification:
      require(graph.graph_label().has_value(), ErrorCode::kAllLabelsMasked, "graph has no label");
      return masked_sigmoid_cross_entropy(prediction, *graph.graph_label());
    case TaskType::kGraphRegression:
      require(graph.graph_label().has_value(), ErrorCode::kAllLabelsMasked, "graph has no label");
      return mean_squared_error(prediction, *graph.graph_label());
    case TaskType::kNodeClassification:
      require(graph.node_labels().has_value(), ErrorCode::kAllLabelsMasked, "graph has no labels");
      return softmax_cross_entropy(prediction, *graph.node_labels());
    case TaskType::kLinkRegression: {
      require(unit.item < graph.edge_labels().size(), ErrorCode::kIndexOutOfRange,
              "edge label index");
      const double y = graph.edge_labels()[unit.item].value;
      return mean_squared_error(prediction, std::span<const double>(&y, 1));
    }
  }
  fail(ErrorCode::kInvalidConfig, "unknown task");
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGcn: return "gcn";
    case ModelKind::kSage: return "sage";
    case ModelKind::kGat: return "gat";
    case ModelKind::kSgc: return "sgc";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view name) {
  for (ModelKind k : {ModelKind::kGcn, ModelKind::kSage, ModelKind::kGat, ModelKind::kSgc})
    if (model_name(k) == name) return k;
  if (name == "graphsage") return ModelKind::kSage;
  fail(ErrorCode::kInvalidConfig, "model: unknown model '" + std::string(name) + "'");
}

std::string_view pooling_name(Pooling pooling) {
  return pooling == Pooling::kSum ? "sum" : "mean";
}

Pooling parse_pooling(std::string_view name) {
  if (name == "sum") return Pooling::kSum;
  if (name == "mean") return Pooling::kMean;
  fail(ErrorCode::kInvalidConfig, "model.pooling: unknown pooling '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  require(num_layers >= 1, ErrorCode::kInvalidConfig, "model.num_layers must be >= 1");
  require(node_embedding_dim > 0, ErrorCode::kInvalidConfig, "model.node_embedding_dim must be > 0");
  require(hidden_dim > 0, ErrorCode::kInvalidConfig, "model.hidden_dim must be > 0");
  require(readout_dim > 0, ErrorCode::kInvalidConfig, "model.readout_dim must be > 0");
  require(graph_embedding_dim > 0, ErrorCode::kInvalidConfig,
          "model.graph_embedding_dim must be > 0");
  require(attention_heads >= 1, ErrorCode::kInvalidConfig, "model.attention_heads must be >= 1");
  require(dropout >= 0.0 && dropout < 1.0, ErrorCode::kInvalidConfig,
          "model.dropout must lie in [0, 1)");
  require(std::isfinite(leaky_slope), ErrorCode::kInvalidConfig, "model.leaky_slope must be finite");
  if (model == ModelKind::kGat && num_layers > 1) {
    require(hidden_dim % attention_heads == 0, ErrorCode::kHeadDivisibility,
            "model.hidden_dim " + std::to_string(hidden_dim) + " not divisible by " +
                std::to_string(attention_heads) + " heads");
  }
}

GnnModel::GnnModel(ModelConfig config, std::size_t node_feature_dim, std::size_t num_outputs)
    : config_(config), node_feature_dim_(node_feature_dim), num_outputs_(num_outputs) {
  config_.validate();
  require(node_feature_dim_ > 0, ErrorCode::kInvalidConfig, "node feature width must be > 0");
  require(num_outputs_ > 0, ErrorCode::kInvalidConfig, "model needs at least one output");

  const std::size_t emb = config_.node_embedding_dim;
  if (config_.model == ModelKind::kSgc) {
    const std::size_t out = node_head_is_body() ? num_outputs_ : emb;
    layout_.add("gnn.weight", node_feature_dim_, out);
    layout_.add("gnn.bias", 1, out);
  } else {
    for (std::size_t l = 0; l < config_.num_layers; ++l) {
      const std::size_t in = layer_in(l);
      const std::size_t out = layer_out(l);
      switch (config_.model) {
        case ModelKind::kGcn:
          layout_.add(layer_prefix(l) + "weight", in, out);
          layout_.add(layer_prefix(l) + "bias", 1, out);
          break;
        case ModelKind::kSage:
          layout_.add(layer_prefix(l) + "weight_self", in, out);
          layout_.add(layer_prefix(l) + "weight_neigh", in, out);
          layout_.add(layer_prefix(l) + "bias", 1, out);
          break;
        case ModelKind::kGat:
          for (std::size_t h = 0; h < config_.attention_heads; ++h) {
            layout_.add(head_prefix(l, h) + "weight", in, out);
            layout_.add(head_prefix(l, h) + "att_src", 1, out);
            layout_.add(head_prefix(l, h) + "att_dst", 1, out);
          }
          break;
        case ModelKind::kSgc:
          break;
      }
    }
  }

  switch (config_.task) {
    case TaskType::kGraphClassification:
    case TaskType::kGraphRegression:
      layout_.add("readout.w1", emb, config_.graph_embedding_dim);
      layout_.add("readout.b1", 1, config_.graph_embedding_dim);
      layout_.add("readout.w2", config_.graph_embedding_dim, num_outputs_);
      layout_.add("readout.b2", 1, num_outputs_);
      break;
    case TaskType::kNodeClassification:
      if (!node_head_is_body()) {
        layout_.add("readout.weight", emb, num_outputs_);
        layout_.add("readout.bias", 1, num_outputs_);
      }
      break;
    case TaskType::kLinkRegression:
      layout_.add("readout.w1", 2 * emb, config_.readout_dim);
      layout_.add("readout.b1", 1, config_.readout_dim);
      layout_.add("readout.w2", config_.readout_dim, num_outputs_);
      layout_.add("readout.b2", 1, num_outputs_);
      break;
  }
}

bool GnnModel::node_head_is_body() const {
  return config_.model == ModelKind::kSgc && config_.task == TaskType::kNodeClassification;
}

std::size_t GnnModel::layer_in(std::size_t l) const {
  return l == 0 ? node_feature_dim_ : config_.hidden_dim;
}

std::size_t GnnModel::layer_out(std::size_t l) const {
  const bool last = l + 1 == config_.num_layers;
  if (config_.model == ModelKind::kGat && !last)
    return config_.hidden_dim / config_.attention_heads;
  return last ? config_.node_embedding_dim : config_.hidden_dim;
}

ParamVector GnnModel::initial_params(std::uint64_t seed) const {
  ParamVector p(layout_);
  Rng rng(seed);
  for (std::size_t i = 0; i < layout_.num_segments(); ++i) {
    const auto& s = layout_.segment(i);
    const bool is_bias = s.name.ends_with("bias") || s.name == "readout.b1" ||
                         s.name == "readout.b2";
    if (is_bias) continue;
    // Attention vectors are f x 1 maps; their stored shape is 1 x f.
    const bool is_attention = s.name.ends_with("att_src") || s.name.ends_with("att_dst");
    const double fan_in = static_cast<double>(is_attention ? s.cols : s.rows);
    const double fan_out = static_cast<double>(is_attention ? 1 : s.cols);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : p.segment(i)) v = (2.0 * rng.uniform() - 1.0) * limit;
  }
  return p;
}

struct GnnModel::Tape {
  std::vector<DenseMatrix> inputs;          // post-dropout input of each layer
  std::vector<DropoutResult> dropouts;      // empty when dropout is off
  std::vector<GcnCache> gcn;
  std::vector<SageCache> sage;
  std::vector<GatCache> gat;
  SparseMatrix a_hat;
  SparseMatrix mean_op;
  SparseMatrix structure;
  DenseMatrix final_h;
  GraphReadoutCache graph_head;
  MlpCache link_head;
};

DenseMatrix GnnModel::forward(const ParamVector& params, const Graph& graph, TrainingUnit unit,
                              Rng* dropout_rng, Tape* tape) const {
  require_same_layout(params.layout(), layout_);
  require(graph.feature_dim() == node_feature_dim_, ErrorCode::kDimensionMismatch,
          "graph feature width " + std::to_string(graph.feature_dim()) + " != model input " +
              std::to_string(node_feature_dim_));
  require(graph.num_nodes() > 0, ErrorCode::kEmptyGraph, "graph has no nodes");
  Tape& t = *tape;
  const bool drop = dropout_rng != nullptr && config_.dropout > 0.0;
  const auto& L = layout_;

  auto apply_dropout = [&](const DenseMatrix& x) {
    if (!drop) {
      t.inputs.push_back(x);
      return;
    }
    t.dropouts.push_back(dropout_forward(x, config_.dropout, *dropout_rng));
    t.inputs.push_back(t.dropouts.back().output);
  };

  DenseMatrix h;
  if (config_.model == ModelKind::kSgc) {
    t.a_hat = normalize_adjacency(graph);
    apply_dropout(propagate(t.a_hat, graph.node_features(), config_.sgc_hops));
    h = dense_matmul(t.inputs.back(), params.matrix(L.index_of("gnn.weight")));
    add_row_vector(h, params.segment(L.index_of("gnn.bias")));
  } else {
    if (config_.model == ModelKind::kGcn) t.a_hat = normalize_adjacency(graph);
    if (config_.model == ModelKind::kSage) t.mean_op = mean_aggregator(graph);
    if (config_.model == ModelKind::kGat) t.structure = self_loop_structure(graph);
    h = graph.node_features();
    for (std::size_t l = 0; l < config_.num_layers; ++l) {
      apply_dropout(h);
      const DenseMatrix& x = t.inputs.back();
      const std::string pre = layer_prefix(l);
      switch (config_.model) {
        case ModelKind::kGcn:
          t.gcn.emplace_back();
          h = gcn_layer(x, t.a_hat, params.matrix(L.index_of(pre + "weight")),
                        params.segment(L.index_of(pre + "bias")), Activation::relu(),
                        &t.gcn.back());
          break;
        case ModelKind::kSage:
          t.sage.emplace_back();
          h = sage_layer(x, t.mean_op, params.matrix(L.index_of(pre + "weight_self")),
                         params.matrix(L.index_of(pre + "weight_neigh")),
                         params.segment(L.index_of(pre + "bias")), Activation::relu(),
                         &t.sage.back());
          break;
        case ModelKind::kGat: {
          std::vector<GatHead> heads;
          for (std::size_t hd = 0; hd < config_.attention_heads; ++hd) {
            const std::string hp = head_prefix(l, hd);
            heads.push_back({params.matrix(L.index_of(hp + "weight")),
                             to_vector(params.segment(L.index_of(hp + "att_src"))),
                             to_vector(params.segment(L.index_of(hp + "att_dst")))});
          }
          const bool last = l + 1 == config_.num_layers;
          t.gat.emplace_back();
          h = gat_layer(x, t.structure, heads, config_.leaky_slope,
                        last ? HeadCombine::kMean : HeadCombine::kConcat, Activation::relu(),
                        &t.gat.back());
          break;
        }
        case ModelKind::kSgc:
          break;
      }
    }
  }
  t.final_h = h;

  switch (config_.task) {
    case TaskType::kGraphClassification:
    case TaskType::kGraphRegression:
      return readout_graph(h, config_.pooling, load_mlp(params), &t.graph_head);
    case TaskType::kNodeClassification:
      if (node_head_is_body()) return h;
      return readout_node(h, params.matrix(L.index_of("readout.weight")),
                          params.segment(L.index_of("readout.bias")));
    case TaskType::kLinkRegression: {
      require(unit.item < graph.edge_labels().size(), ErrorCode::kIndexOutOfRange,
              "edge label index " + std::to_string(unit.item));
      const auto& e = graph.edge_labels()[unit.item];
      return readout_link(h, e.src, e.dst, load_mlp(params), &t.link_head);
    }
  }
  fail(ErrorCode::kInvalidConfig, "unknown task");
}

void GnnModel::backward(const ParamVector& params, const Graph& graph, TrainingUnit unit,
                        const Tape& t, const DenseMatrix& grad_prediction,
                        ParamVector* gradient) const {
  const auto& L = layout_;
  DenseMatrix dh;
  switch (config_.task) {
    case TaskType::kGraphClassification:
    case TaskType::kGraphRegression: {
      MlpGrad mg;
      dh = readout_graph_backward(load_mlp(params), graph.num_nodes(), config_.pooling,
                                  t.graph_head, grad_prediction, &mg);
      store_mlp_grad(mg, gradient);
      break;
    }
    case TaskType::kNodeClassification:
      if (node_head_is_body()) {
        dh = grad_prediction;
      } else {
        gradient->accumulate(L.index_of("readout.weight"),
                             matmul_tn(t.final_h, grad_prediction).values());
        gradient->accumulate(L.index_of("readout.bias"), column_sums(grad_prediction));
        dh = matmul_nt(grad_prediction, params.matrix(L.index_of("readout.weight")));
      }
      break;
    case TaskType::kLinkRegression: {
      const auto& e = graph.edge_labels()[unit.item];
      MlpGrad mg;
      dh = readout_link_backward(load_mlp(params), graph.num_nodes(), e.src, e.dst, t.link_head,
                                 grad_prediction, &mg);
      store_mlp_grad(mg, gradient);
      break;
    }
  }

  const bool drop = !t.dropouts.empty();
  if (config_.model == ModelKind::kSgc) {
    gradient->accumulate(L.index_of("gnn.weight"), matmul_tn(t.inputs.front(), dh).values());
    gradient->accumulate(L.index_of("gnn.bias"), column_sums(dh));
    return;
  }
  for (std::size_t li = config_.num_layers; li-- > 0;) {
    const std::string pre = layer_prefix(li);
    const DenseMatrix& x = t.inputs[li];
    DenseMatrix dx;
    switch (config_.model) {
      case ModelKind::kGcn: {
        const auto w_idx = L.index_of(pre + "weight");
        LayerGrad g = gcn_layer_backward(x, t.a_hat, params.matrix(w_idx), Activation::relu(),
                                         t.gcn[li], dh);
        gradient->accumulate(w_idx, g.d_weights[0].values());
        gradient->accumulate(L.index_of(pre + "bias"), g.d_bias);
        dx = std::move(g.d_input);
        break;
      }
      case ModelKind::kSage: {
        const auto ws = L.index_of(pre + "weight_self");
        const auto wn = L.index_of(pre + "weight_neigh");
        LayerGrad g = sage_layer_backward(x, t.mean_op, params.matrix(ws), params.matrix(wn),
                                          Activation::relu(), t.sage[li], dh);
        gradient->accumulate(ws, g.d_weights[0].values());
        gradient->accumulate(wn, g.d_weights[1].values());
        gradient->accumulate(L.index_of(pre + "bias"), g.d_bias);
        dx = std::move(g.d_input);
        break;
      }
      case ModelKind::kGat: {
        std::vector<GatHead> heads;
        for (std::size_t hd = 0; hd < config_.attention_heads; ++hd) {
          const std::string hp = head_prefix(li, hd);
          heads.push_back({params.matrix(L.index_of(hp + "weight")),
                           to_vector(params.segment(L.index_of(hp + "att_src"))),
                           to_vector(params.segment(L.index_of(hp + "att_dst")))});
        }
        const bool last = li + 1 == config_.num_layers;
        GatGrad g = gat_layer_backward(x, t.structure, heads, config_.leaky_slope,
                                       last ? HeadCombine::kMean : HeadCombine::kConcat,
                                       Activation::relu(), t.gat[li], dh);
        for (std::size_t hd = 0; hd < config_.attention_heads; ++hd) {
          const std::string hp = head_prefix(li, hd);
          gradient->accumulate(L.index_of(hp + "weight"), g.heads[hd].d_w.values());
          gradient->accumulate(L.index_of(hp + "att_src"), g.heads[hd].d_att_src);
          gradient->accumulate(L.index_of(hp + "att_dst"), g.heads[hd].d_att_dst);
        }
        dx = std::move(g.d_input);
        break;
      }
      case ModelKind::kSgc:
        break;
    }
    if (li == 0) break;  // no parameters below the first layer
    dh = drop ? dropout_backward(t.dropouts[li], dx) : std::move(dx);
  }
}

double GnnModel::loss_and_gradient(const ParamVector& params, const Graph& graph,
                                   TrainingUnit unit, Rng* dropout_rng,
                                   ParamVector* gradient) const {
  Tape tape;
  const DenseMatrix prediction = forward(params, graph, unit, dropout_rng, &tape);
  LossResult loss = unit_loss(config_.task, prediction, graph, unit);
  if (gradient) {
    *gradient = ParamVector(layout_);
    backward(params, graph, unit, tape, loss.grad, gradient);
  }
  return loss.value;
}

DenseMatrix GnnModel::predict(const ParamVector& params, const Graph& graph,
                              TrainingUnit unit) const {
  Tape tape;
  return forward(params, graph, unit, nullptr, &tape);
}

std::size_t param_count(const ModelConfig& config, std::size_t node_feature_dim,
                        std::size_t num_outputs) {
  return GnnModel(config, node_feature_dim, num_outputs).layout().total_size();
}

std::size_t output_count(const GraphDataset& dataset) {
  return dataset.task == TaskType::kLinkRegression ? 1 : dataset.num_tasks_or_classes;
}

}  // namespace fedgraph
