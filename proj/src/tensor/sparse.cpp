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

#include "geograph/tensor/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geograph/errors.hpp"

namespace geograph::tensor {

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0) {
    throw DimensionError("SparseMatrix: negative shape");
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw DimensionError("SparseMatrix: entry (" + std::to_string(t.row) + "," +
                           std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    }
    if (!std::isfinite(t.value)) {
      throw NumericError("SparseMatrix: non-finite entry");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t k = 0;
  for (Index r = 0; r < rows; ++r) {
    while (k < triplets.size() && triplets[k].row == r) {
      const Index c = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
        sum += triplets[k].value;
        ++k;
      }
      if (sum != 0.0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(sum);
      }
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] = m.values_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 1.0});
  }
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> t;
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        t.push_back({i, j, dense(i, j)});
      }
    }
  }
  return from_triplets(dense.rows(), dense.cols(), std::move(t));
}

SparseMatrix SparseMatrix::hconcat(const SparseMatrix& left, const SparseMatrix& right) {
  if (left.rows() != right.rows()) {
    throw DimensionError("SparseMatrix::hconcat: row counts differ (" +
                         std::to_string(left.rows()) + " vs " + std::to_string(right.rows()) + ")");
  }
  SparseMatrix m(left.rows(), left.cols() + right.cols());
  m.col_idx_.reserve(left.nnz() + right.nnz());
  m.values_.reserve(left.nnz() + right.nnz());
  for (Index r = 0; r < left.rows(); ++r) {
    const auto lc = left.row_cols(r);
    const auto lv = left.row_values(r);
    m.col_idx_.insert(m.col_idx_.end(), lc.begin(), lc.end());
    m.values_.insert(m.values_.end(), lv.begin(), lv.end());
    const auto rc = right.row_cols(r);
    const auto rv = right.row_values(r);
    for (const Index c : rc) {
      m.col_idx_.push_back(c + left.cols());
    }
    m.values_.insert(m.values_.end(), rv.begin(), rv.end());
    m.row_ptr_[static_cast<std::size_t>(r) + 1] = m.values_.size();
  }
  return m;
}

std::span<const Index> SparseMatrix::row_cols(Index r) const {
  const auto b = row_ptr_[static_cast<std::size_t>(r)];
  const auto e = row_ptr_[static_cast<std::size_t>(r) + 1];
  return std::span<const Index>(col_idx_).subspan(b, e - b);
}

std::span<const double> SparseMatrix::row_values(Index r) const {
  const auto b = row_ptr_[static_cast<std::size_t>(r)];
  const auto e = row_ptr_[static_cast<std::size_t>(r) + 1];
  return std::span<const double>(values_).subspan(b, e - b);
}

double SparseMatrix::coeff(Index r, Index c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) {
    return 0.0;
  }
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
  for (Index r = 0; r < rows_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      d(r, cols[k]) = vals[k];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<std::size_t> counts(static_cast<std::size_t>(cols_) + 1, 0);
  for (const Index c : col_idx_) {
    ++counts[static_cast<std::size_t>(c) + 1];
  }
  for (std::size_t i = 1; i < counts.size(); ++i) {
    counts[i] += counts[i - 1];
  }
  t.row_ptr_ = counts;
  t.col_idx_.resize(values_.size());
  t.values_.resize(values_.size());
  // Row-major traversal keeps the transposed column indices sorted.
  for (Index r = 0; r < rows_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto dst = counts[static_cast<std::size_t>(cols[k])]++;
      t.col_idx_[dst] = r;
      t.values_[dst] = vals[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::with_scaled_values(std::span<const double> scale) const {
  if (scale.size() != values_.size()) {
    throw DimensionError("SparseMatrix::with_scaled_values: expected " +
                         std::to_string(values_.size()) + " scales, got " +
                         std::to_string(scale.size()));
  }
  SparseMatrix m(rows_, cols_);
  m.col_idx_.reserve(values_.size());
  m.values_.reserve(values_.size());
  for (Index r = 0; r < rows_; ++r) {
    for (auto k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1];
         ++k) {
      const double v = values_[k] * scale[k];
      if (!std::isfinite(v)) {
        throw NumericError("SparseMatrix::with_scaled_values: non-finite result");
      }
      if (v != 0.0) {
        m.col_idx_.push_back(col_idx_[k]);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] = m.values_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::select_rows(std::span<const Index> rows) const {
  SparseMatrix m(static_cast<Index>(rows.size()), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index r = rows[i];
    if (r < 0 || r >= rows_) {
      throw DimensionError("SparseMatrix::select_rows: row " + std::to_string(r) + " out of range");
    }
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    m.col_idx_.insert(m.col_idx_.end(), cols.begin(), cols.end());
    m.values_.insert(m.values_.end(), vals.begin(), vals.end());
    m.row_ptr_[i + 1] = m.values_.size();
  }
  return m;
}

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& d) {
  if (s.cols() != d.rows()) {
    throw DimensionError("spmm: sparse has " + std::to_string(s.cols()) + " columns but dense has " +
                         std::to_string(d.rows()) + " rows");
  }
  DenseMatrix out = DenseMatrix::Zero(s.rows(), d.cols());
  for (Index r = 0; r < s.rows(); ++r) {
    const auto cols = s.row_cols(r);
    const auto vals = s.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.row(r) += vals[k] * d.row(cols[k]);
    }
  }
  return out;
}

DenseMatrix spmm_transposed(const SparseMatrix& s, const DenseMatrix& d) {
  if (s.rows() != d.rows()) {
    throw DimensionError("spmm_transposed: sparse has " + std::to_string(s.rows()) +
                         " rows but dense has " + std::to_string(d.rows()) + " rows");
  }
  DenseMatrix out = DenseMatrix::Zero(s.cols(), d.cols());
  for (Index r = 0; r < s.rows(); ++r) {
    const auto cols = s.row_cols(r);
    const auto vals = s.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.row(cols[k]) += vals[k] * d.row(r);
    }
  }
  return out;
}

}  // namespace geograph::tensor
