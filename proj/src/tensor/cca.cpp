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

#include "geograph/tensor/cca.hpp"

#include <cmath>
#include <string>

#include "geograph/errors.hpp"

namespace geograph::tensor {

namespace {

using Square = Eigen::MatrixXd;

Square inverse_sqrt_spd(const Square& s, const char* which) {
  Eigen::SelfAdjointEigenSolver<Square> eig(s);
  if (eig.info() != Eigen::Success) {
    throw NumericError(std::string("cca: eigendecomposition of ") + which + " failed");
  }
  const Eigen::VectorXd& e = eig.eigenvalues();
  if (e.minCoeff() <= 0.0) {
    throw NumericError(std::string("cca: ") + which + " is not positive definite");
  }
  return eig.eigenvectors() * e.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

CcaObjective cca_objective(const DenseMatrix& h1, const DenseMatrix& h2, double reg) {
  if (h1.rows() != h2.rows()) {
    throw DimensionError("cca: views have " + std::to_string(h1.rows()) + " and " +
                         std::to_string(h2.rows()) + " rows");
  }
  if (!(reg > 0.0)) {
    throw ArgumentError("cca: regulariser must be positive");
  }
  const Index n = h1.rows();
  if (n <= std::max(h1.cols(), h2.cols())) {
    throw RankError("cca: need more samples (" + std::to_string(n) + ") than output dimensions (" +
                    std::to_string(std::max(h1.cols(), h2.cols())) + ")");
  }
  if (!h1.allFinite() || !h2.allFinite()) {
    throw NumericError("cca: non-finite view");
  }

  const Square c1 = h1.rowwise() - h1.colwise().mean();
  const Square c2 = h2.rowwise() - h2.colwise().mean();
  const double scale = 1.0 / static_cast<double>(n - 1);

  Square s11 = scale * c1.transpose() * c1;
  Square s22 = scale * c2.transpose() * c2;
  const Square s12 = scale * c1.transpose() * c2;
  s11.diagonal().array() += reg;
  s22.diagonal().array() += reg;
  if (!s11.allFinite() || !s22.allFinite() || !s12.allFinite()) {
    throw NumericError("cca: non-finite covariance");
  }

  const Square p = inverse_sqrt_spd(s11, "S11");
  const Square q = inverse_sqrt_spd(s22, "S22");
  const Square t = p * s12 * q;

  Eigen::JacobiSVD<Square> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& d = svd.singularValues();
  const Square& u = svd.matrixU();
  const Square& v = svd.matrixV();

  // Envelope-theorem gradients of the trace norm w.r.t. the covariances.
  const Square grad12 = p * u * v.transpose() * q;
  const Square grad11 = -0.5 * p * u * d.asDiagonal() * u.transpose() * p;
  const Square grad22 = -0.5 * q * v * d.asDiagonal() * v.transpose() * q;

  CcaObjective out;
  out.total_correlation = d.sum();
  out.correlations = d;
  out.grad_h1 = scale * (2.0 * c1 * grad11 + c2 * grad12.transpose());
  out.grad_h2 = scale * (2.0 * c2 * grad22 + c1 * grad12);
  return out;
}

}  // namespace geograph::tensor
