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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedgraph/ndmath/dense.hpp"

namespace fedgraph {

struct ParamSegment {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const ParamSegment&, const ParamSegment&) = default;
};

// Ordered list of named tensors packed back to back into one flat vector.
class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(std::vector<ParamSegment> segments);

  // Appends a segment and returns its index.
  std::size_t add(std::string name, std::size_t rows, std::size_t cols);

  std::size_t num_segments() const { return segments_.size(); }
  const ParamSegment& segment(std::size_t i) const { return segments_[i]; }
  const std::vector<ParamSegment>& segments() const { return segments_; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  std::size_t total_size() const { return offsets_.back(); }
  // Index of the named segment; throws LayoutMismatch when absent.
  std::size_t index_of(std::string_view name) const;

  friend bool operator==(const ParamLayout& a, const ParamLayout& b) {
    return a.segments_ == b.segments_;
  }

 private:
  std::vector<ParamSegment> segments_;
  std::vector<std::size_t> offsets_{0};
};

// Flat model parameters (or gradients) with their layout.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(ParamLayout layout, double fill = 0.0);
  ParamVector(ParamLayout layout, std::vector<double> data);

  const ParamLayout& layout() const { return layout_; }
  std::size_t size() const { return data_.size(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& storage() const { return data_; }

  std::span<double> segment(std::size_t i);
  std::span<const double> segment(std::size_t i) const;
  DenseMatrix matrix(std::size_t i) const;
  // Adds a matrix (or vector, as 1 x n) into segment i.
  void accumulate(std::size_t i, std::span<const double> values);

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  ParamLayout layout_;
  std::vector<double> data_;
};

// Throws LayoutMismatch unless both layouts are identical.
void require_same_layout(const ParamLayout& a, const ParamLayout& b);

double l2_norm(std::span<const double> v);
double linf_distance(std::span<const double> a, std::span<const double> b);

}  // namespace fedgraph
