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

#include "geograph/tensor/dense.hpp"

#include <cmath>
#include <string>

#include "geograph/errors.hpp"

namespace geograph::tensor {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

DenseMatrix dense_affine(const DenseMatrix& x, const DenseMatrix& w, const RowVector& b) {
  if (x.cols() != w.rows()) {
    throw DimensionError("dense_affine: X has " + std::to_string(x.cols()) + " columns but W has " +
                         std::to_string(w.rows()) + " rows");
  }
  if (b.size() != w.cols()) {
    throw DimensionError("dense_affine: bias length " + std::to_string(b.size()) +
                         " does not match W columns " + std::to_string(w.cols()));
  }
  DenseMatrix out = x * w;
  out.rowwise() += b;
  return out;
}

DenseMatrix relu(const DenseMatrix& x) { return x.cwiseMax(0.0); }

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

DenseMatrix sigmoid(const DenseMatrix& x) {
  return x.unaryExpr([](double v) { return sigmoid(v); });
}

DenseMatrix softmax_rows(const DenseMatrix& x) {
  DenseMatrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double m = x.row(i).maxCoeff();
    out.row(i) = (x.row(i).array() - m).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

DenseMatrix elementwise_mul(const DenseMatrix& x, const DenseMatrix& y) {
  require_same_shape(x, y, "elementwise_mul");
  return x.cwiseProduct(y);
}

bool all_finite(const DenseMatrix& x) { return x.allFinite(); }

}  // namespace geograph::tensor
