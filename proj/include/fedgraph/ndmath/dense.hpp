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
#include <initializer_list>
#include <span>
#include <vector>

namespace fedgraph {

// Row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& storage() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// C = A * B. Each output entry accumulates over k in ascending order.
DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b);
// C = A^T * B.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// C = A * B^T.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

// Gradients of L with respect to both factors of C = A * B given dL/dC.
struct MatmulGrad {
  DenseMatrix da;
  DenseMatrix db;
};
MatmulGrad dense_matmul_backward(const DenseMatrix& a, const DenseMatrix& b,
                                 const DenseMatrix& grad_out);

DenseMatrix transpose(const DenseMatrix& m);

// M[i, :] += bias for every row.
void add_row_vector(DenseMatrix& m, std::span<const double> bias);
std::vector<double> column_sums(const DenseMatrix& m);

void add_inplace(DenseMatrix& target, const DenseMatrix& other);
void scale_inplace(DenseMatrix& target, double factor);

// Horizontal concatenation / slicing of column blocks.
DenseMatrix hconcat(std::span<const DenseMatrix> blocks);
DenseMatrix column_block(const DenseMatrix& m, std::size_t first, std::size_t count);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace fedgraph
