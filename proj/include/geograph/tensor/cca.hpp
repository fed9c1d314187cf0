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

#include "geograph/tensor/dense.hpp"

namespace geograph::tensor {

/// Total canonical correlation between two projected views and its gradient.
struct CcaObjective {
  /// Sum of singular values of S11^{-1/2} S12 S22^{-1/2}.
  double total_correlation = 0.0;
  /// Individual canonical correlations, descending.
  Eigen::VectorXd correlations;
  /// d(total_correlation) / d(h1) and / d(h2).
  DenseMatrix grad_h1;
  DenseMatrix grad_h2;
};

/// Columns of both views are centred; covariances use 1/(n-1) and get
/// `reg * I` added to their diagonals. Requires n > max(cols) and reg > 0.
CcaObjective cca_objective(const DenseMatrix& h1, const DenseMatrix& h2, double reg);

}  // namespace geograph::tensor
