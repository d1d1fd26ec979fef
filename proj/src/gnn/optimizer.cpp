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

#include "fedgraph/gnn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  fail(ErrorCode::kInvalidConfig, "fl.optimizer: unknown optimizer '" + std::string(name) + "'");
}

void SgdOptimizer::step(std::span<double> params, std::span<const double> grad) {
  require(params.size() == grad.size(), ErrorCode::kDimensionMismatch, "sgd gradient length");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr_ * grad[i];
}

AdamOptimizer::AdamOptimizer(const OptimizerConfig& config, std::size_t size)
    : config_(config), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad) {
  require(params.size() == grad.size() && params.size() == m_.size(),
          ErrorCode::kDimensionMismatch, "adam gradient length");
  ++steps_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

void AdamOptimizer::reset() {
  std::fill(m_.begin(), m_.end(), 0.0);
  std::fill(v_.begin(), v_.end(), 0.0);
  steps_ = 0;
}

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config, std::size_t size) {
  if (config.kind == OptimizerKind::kSgd) return std::make_unique<SgdOptimizer>(config.learning_rate);
  return std::make_unique<AdamOptimizer>(config, size);
}

}  // namespace fedgraph
