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

#include <Eigen/Dense>

namespace geograph::tensor {

using Index = Eigen::Index;

/// Row-major dense matrix of doubles. Houses layer activations and weights.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

/// X * W with `b` added to every row.
DenseMatrix dense_affine(const DenseMatrix& x, const DenseMatrix& w, const RowVector& b);

DenseMatrix relu(const DenseMatrix& x);

/// Logistic sigmoid, evaluated without overflow for large |x|.
DenseMatrix sigmoid(const DenseMatrix& x);
double sigmoid(double x);

/// Row-wise softmax with max-subtraction.
DenseMatrix softmax_rows(const DenseMatrix& x);

DenseMatrix elementwise_mul(const DenseMatrix& x, const DenseMatrix& y);

bool all_finite(const DenseMatrix& x);

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op);

}  // namespace geograph::tensor
