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

#include <cstdint>
#include <random>

#include "geograph/tensor/dense.hpp"
#include "geograph/tensor/sparse.hpp"
#include "oracles.hpp"

namespace testutil {

inline oracle::Mat to_oracle(const geograph::tensor::DenseMatrix& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < out.rows; ++i) {
    for (std::size_t j = 0; j < out.cols; ++j) {
      out(i, j) = m(static_cast<geograph::tensor::Index>(i), static_cast<geograph::tensor::Index>(j));
    }
  }
  return out;
}

inline geograph::tensor::DenseMatrix random_dense(geograph::tensor::Index rows,
                                                  geograph::tensor::Index cols,
                                                  std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  geograph::tensor::DenseMatrix m(rows, cols);
  for (geograph::tensor::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = normal(rng);
  }
  return m;
}

/// Sparse matrix with roughly `density` of entries set to random values.
inline geograph::tensor::SparseMatrix random_sparse(geograph::tensor::Index rows,
                                                    geograph::tensor::Index cols, double density,
                                                    std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> value(0.1, 1.0);
  std::vector<geograph::tensor::SparseMatrix::Triplet> t;
  for (geograph::tensor::Index r = 0; r < rows; ++r) {
    for (geograph::tensor::Index c = 0; c < cols; ++c) {
      if (keep(rng)) {
        t.push_back({r, c, value(rng)});
      }
    }
  }
  return geograph::tensor::SparseMatrix::from_triplets(rows, cols, std::move(t));
}

/// Random undirected simple graph as a symmetric 0/1 adjacency without self-loops.
inline geograph::tensor::SparseMatrix random_graph(geograph::tensor::Index n, double p,
                                                   std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  std::vector<geograph::tensor::SparseMatrix::Triplet> t;
  for (geograph::tensor::Index i = 0; i < n; ++i) {
    for (geograph::tensor::Index j = i + 1; j < n; ++j) {
      if (edge(rng)) {
        t.push_back({i, j, 1.0});
        t.push_back({j, i, 1.0});
      }
    }
  }
  return geograph::tensor::SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace testutil
