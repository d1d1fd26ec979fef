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

#include "fedgraph/gnn/params.hpp"

#include <algorithm>
#include <cmath>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

ParamLayout::ParamLayout(std::vector<ParamSegment> segments) {
  for (auto& s : segments) add(std::move(s.name), s.rows, s.cols);
}

std::size_t ParamLayout::add(std::string name, std::size_t rows, std::size_t cols) {
  require(name.size() < 256, ErrorCode::kInvalidParams, "segment name too long: " + name);
  segments_.push_back({std::move(name), rows, cols});
  offsets_.push_back(offsets_.back() + rows * cols);
  return segments_.size() - 1;
}

std::size_t ParamLayout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < segments_.size(); ++i)
    if (segments_[i].name == name) return i;
  fail(ErrorCode::kLayoutMismatch, "no segment named '" + std::string(name) + "'");
}

ParamVector::ParamVector(ParamLayout layout, double fill)
    : layout_(std::move(layout)), data_(layout_.total_size(), fill) {}

ParamVector::ParamVector(ParamLayout layout, std::vector<double> data)
    : layout_(std::move(layout)), data_(std::move(data)) {
  require(data_.size() == layout_.total_size(), ErrorCode::kLayoutMismatch,
          "parameter data length " + std::to_string(data_.size()) + " != layout size " +
              std::to_string(layout_.total_size()));
}

std::span<double> ParamVector::segment(std::size_t i) {
  return std::span<double>(data_).subspan(layout_.offset(i), layout_.segment(i).size());
}

std::span<const double> ParamVector::segment(std::size_t i) const {
  return std::span<const double>(data_).subspan(layout_.offset(i), layout_.segment(i).size());
}

DenseMatrix ParamVector::matrix(std::size_t i) const {
  auto s = segment(i);
  return DenseMatrix(layout_.segment(i).rows, layout_.segment(i).cols,
                     std::vector<double>(s.begin(), s.end()));
}

void ParamVector::accumulate(std::size_t i, std::span<const double> values) {
  auto s = segment(i);
  require(values.size() == s.size(), ErrorCode::kDimensionMismatch,
          "gradient size for segment " + layout_.segment(i).name);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] += values[k];
}

void require_same_layout(const ParamLayout& a, const ParamLayout& b) {
  require(a == b, ErrorCode::kLayoutMismatch, "parameter layouts differ");
}

double l2_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "vector lengths differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace fedgraph
