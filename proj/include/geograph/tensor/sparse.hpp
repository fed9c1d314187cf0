// Copyright 2026 The geograph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geograph/tensor/dense.hpp"

namespace geograph::tensor {

/// Compressed-row sparse matrix of doubles.
///
/// Column indices within each row are strictly increasing, no explicit zeros
/// are stored and every value is finite. Instances are immutable once built.
class SparseMatrix {
 public:
  struct Triplet {
    Index row;
    Index col;
    double value;
  };

  SparseMatrix() = default;

  /// All-zero matrix of the given shape.
  SparseMatrix(Index rows, Index cols);

  /// Duplicate (row, col) entries are summed; entries that sum to zero are dropped.
  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const DenseMatrix& dense);

  /// [left | right]; both operands must have the same row count.
  static SparseMatrix hconcat(const SparseMatrix& left, const SparseMatrix& right);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_ptr_; }
  std::span<const Index> col_indices() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index r) const;
  std::span<const double> row_values(Index r) const;

  /// Stored value at (r, c), or 0.
  double coeff(Index r, Index c) const;

  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;

  /// Same sparsity pattern with every value multiplied by `scale[k]` for the k-th
  /// stored entry. Entries whose scaled value is zero are removed.
  SparseMatrix with_scaled_values(std::span<const double> scale) const;

  /// Copy restricted to the listed rows, in the listed order.
  SparseMatrix select_rows(std::span<const Index> rows) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// S * D.
DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& d);

/// transpose(S) * D without materialising the transpose.
DenseMatrix spmm_transposed(const SparseMatrix& s, const DenseMatrix& d);

}  // namespace geograph::tensor
