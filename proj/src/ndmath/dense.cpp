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

#include "fedgraph/ndmath/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {
namespace {

std::string shape(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows * cols, ErrorCode::kDimensionMismatch,
          "matrix data length does not equal rows*cols");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, ErrorCode::kDimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), ErrorCode::kDimensionMismatch,
          "matmul " + shape(a) + " * " + shape(b));
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    auto lhs = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double s = lhs[k];
      // Skipping exact zeros leaves every finite sum unchanged and makes
      // sparse 0/1 feature matrices cheap.
      if (s == 0.0) continue;
      auto rhs = b.row(k);
      for (std::size_t j = 0; j < n; ++j) out[j] += s * rhs[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch,
          "matmul_tn " + shape(a) + "^T * " + shape(b));
  DenseMatrix c(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto lhs = a.row(k);
    auto rhs = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double s = lhs[i];
      if (s == 0.0) continue;
      auto out = c.row(i);
      for (std::size_t j = 0; j < n; ++j) out[j] += s * rhs[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.cols(), ErrorCode::kDimensionMismatch,
          "matmul_nt " + shape(a) + " * " + shape(b) + "^T");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto lhs = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto rhs = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += lhs[k] * rhs[k];
      c(i, j) = acc;
    }
  }
  return c;
}

MatmulGrad dense_matmul_backward(const DenseMatrix& a, const DenseMatrix& b,
                                 const DenseMatrix& grad_out) {
  require(grad_out.rows() == a.rows() && grad_out.cols() == b.cols(),
          ErrorCode::kDimensionMismatch, "matmul gradient shape " + shape(grad_out));
  return {matmul_nt(grad_out, b), matmul_tn(a, grad_out)};
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

void add_row_vector(DenseMatrix& m, std::span<const double> bias) {
  require(bias.size() == m.cols(), ErrorCode::kDimensionMismatch, "bias length");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += bias[j];
  }
}

std::vector<double> column_sums(const DenseMatrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j];
  }
  return out;
}

void add_inplace(DenseMatrix& target, const DenseMatrix& other) {
  require(target.rows() == other.rows() && target.cols() == other.cols(),
          ErrorCode::kDimensionMismatch, "add " + shape(target) + " + " + shape(other));
  auto t = target.values();
  auto o = other.values();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += o[i];
}

void scale_inplace(DenseMatrix& target, double factor) {
  for (double& v : target.values()) v *= factor;
}

DenseMatrix hconcat(std::span<const DenseMatrix> blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    require(b.rows() == rows, ErrorCode::kDimensionMismatch, "hconcat row count");
    cols += b.cols();
  }
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t offset = 0;
    for (const auto& b : blocks) {
      auto src = b.row(i);
      std::copy(src.begin(), src.end(), out.row(i).begin() + static_cast<std::ptrdiff_t>(offset));
      offset += b.cols();
    }
  }
  return out;
}

DenseMatrix column_block(const DenseMatrix& m, std::size_t first, std::size_t count) {
  require(first + count <= m.cols(), ErrorCode::kDimensionMismatch, "column block range");
  DenseMatrix out(m.rows(), count);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = m(i, first + j);
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kDimensionMismatch,
          "max_abs_diff shapes");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

}  // namespace fedgraph
