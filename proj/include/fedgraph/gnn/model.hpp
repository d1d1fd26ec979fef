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
#include <string_view>

#include "fedgraph/common/rng.hpp"
#include "fedgraph/gnn/params.hpp"
#include "fedgraph/gnn/readout.hpp"
#include "fedgraph/graph/dataset.hpp"
#include "fedgraph/graph/graph.hpp"
#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

enum class ModelKind { kGcn, kSage, kGat, kSgc };

std::string_view model_name(ModelKind kind);
ModelKind parse_model(std::string_view name);
std::string_view pooling_name(Pooling pooling);
Pooling parse_pooling(std::string_view name);

struct ModelConfig {
  ModelKind model = ModelKind::kGcn;
  TaskType task = TaskType::kGraphClassification;
  std::size_t num_layers = 2;
  std::size_t node_embedding_dim = 64;
  std::size_t hidden_dim = 64;
  std::size_t readout_dim = 64;
  std::size_t graph_embedding_dim = 64;
  std::size_t attention_heads = 2;
  double leaky_slope = 0.2;
  double dropout = 0.3;
  Pooling pooling = Pooling::kSum;
  std::size_t sgc_hops = 2;

  // Throws InvalidConfig or HeadDivisibility.
  void validate() const;
};

// A fully specified message-passing network plus task head. Holds only
// architecture; parameters travel separately as ParamVectors.
//
// Layer widths: layer 0 maps the node features to hidden_dim, middle layers
// keep hidden_dim, the last layer emits node_embedding_dim. GAT hidden
// layers concatenate attention_heads heads of width hidden_dim / heads;
// the last GAT layer averages its heads. Every GNN layer uses ReLU and
// feature dropout on its input during training.
class GnnModel {
 public:
  GnnModel(ModelConfig config, std::size_t node_feature_dim, std::size_t num_outputs);

  const ModelConfig& config() const { return config_; }
  const ParamLayout& layout() const { return layout_; }
  std::size_t node_feature_dim() const { return node_feature_dim_; }
  std::size_t num_outputs() const { return num_outputs_; }

  // Glorot-uniform weights, zero biases.
  ParamVector initial_params(std::uint64_t seed) const;

  // Loss of one training unit; writes dL/dparams into *gradient (which is
  // reset to the model layout). Dropout is active only when dropout_rng
  // is non-null.
  double loss_and_gradient(const ParamVector& params, const Graph& graph, TrainingUnit unit,
                           Rng* dropout_rng, ParamVector* gradient) const;

  // Inference without dropout. Graph tasks: 1 x num_outputs logits or
  // values. Node classification: num_nodes x classes logits. Link
  // regression: 1 x 1 score for the unit's labeled edge.
  DenseMatrix predict(const ParamVector& params, const Graph& graph, TrainingUnit unit) const;

 private:
  struct Tape;
  DenseMatrix forward(const ParamVector& params, const Graph& graph, TrainingUnit unit,
                      Rng* dropout_rng, Tape* tape) const;
  void backward(const ParamVector& params, const Graph& graph, TrainingUnit unit,
                const Tape& tape, const DenseMatrix& grad_prediction,
                ParamVector* gradient) const;

  std::size_t layer_in(std::size_t l) const;
  std::size_t layer_out(std::size_t l) const;  // per-head width for GAT
  bool node_head_is_body() const;

  ModelConfig config_;
  std::size_t node_feature_dim_;
  std::size_t num_outputs_;
  ParamLayout layout_;
};

std::size_t param_count(const ModelConfig& config, std::size_t node_feature_dim,
                        std::size_t num_outputs);

// Number of model outputs a dataset's task requires.
std::size_t output_count(const GraphDataset& dataset);

}  // namespace fedgraph
