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

#include "fedgraph/ndmath/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  require(row_offsets_.size() == rows_ + 1 && row_offsets_.front() == 0 &&
              row_offsets_.back() == col_indices_.size() &&
              col_indices_.size() == values_.size(),
          ErrorCode::kDimensionMismatch, "inconsistent CSR arrays");
  for (std::size_t r = 0; r < rows_; ++r) {
    require(row_offsets_[r] <= row_offsets_[r + 1], ErrorCode::kDimensionMismatch,
            "CSR row offsets must be non-decreasing");
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      require(col_indices_[k] < cols_, ErrorCode::kIndexOutOfRange,
              "CSR column index " + std::to_string(col_indices_[k]));
      require(k == row_offsets_[r] || col_indices_[k - 1] < col_indices_[k],
              ErrorCode::kDimensionMismatch, "CSR columns must be strictly ascending");
      require(std::isfinite(values_[k]), ErrorCode::kNonFiniteFeature, "CSR value");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    require(t.row < rows && t.col < cols, ErrorCode::kIndexOutOfRange,
            "triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) + ")");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> cols_out;
  std::vector<double> vals;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (!cols_out.empty() && i > 0 && triplets[i - 1].row == t.row &&
        triplets[i - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols_out.push_back(t.col);
    vals.push_back(t.value);
    offsets[t.row + 1]++;
  }
  for (std::size_t r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<std::size_t> counts(cols_ + 1, 0);
  for (std::size_t c : col_indices_) counts[c + 1]++;
  for (std::size_t c = 0; c < cols_; ++c) counts[c + 1] += counts[c];
  std::vector<std::size_t> offsets = counts;
  std::vector<std::size_t> cols(nnz());
  std::vector<double> vals(nnz());
  // Rows are visited in ascending order, so each transposed row comes out
  // sorted.
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const std::size_t dst = counts[col_indices_[k]]++;
      cols[dst] = r;
      vals[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(offsets), std::move(cols), std::move(vals));
}

DenseMatrix SparseMatrix::densify() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      d(r, col_indices_[k]) = values_[k];
  return d;
}

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& b) {
  require(s.cols() == b.rows(), ErrorCode::kDimensionMismatch,
          "spmm " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) + " * " +
              std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  DenseMatrix out(s.rows(), b.cols());
  const auto offsets = s.row_offsets();
  const auto cols = s.col_indices();
  const auto vals = s.values();
  for (std::size_t r = 0; r < s.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const double v = vals[k];
      if (v == 0.0) continue;
      auto src = b.row(cols[k]);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix spmm_backward(const SparseMatrix& s, const DenseMatrix& grad_out) {
  return spmm(s.transposed(), grad_out);
}

}  // namespace fedgraph
