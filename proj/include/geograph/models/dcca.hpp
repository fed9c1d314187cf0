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

#include <optional>
#include <utility>
#include <vector>

#include "geograph/models/classifier.hpp"
#include "geograph/models/mlp.hpp"

namespace geograph::models {

struct DccaConfig {
  /// Width of the sigmoid hidden layer of each projection network.
  int proj_hidden = 1000;
  /// Width of the linear output of each projection network.
  int proj_out = 500;
  double cca_reg = 1e-4;
  /// Hidden width of the supervised classifier on the joint representation.
  int supervised_hidden = 300;
  /// Drop the hidden layer so each projection is a single affine map.
  bool linear_projection = false;
  /// Stage-1 epochs; 0 reuses the supervised epoch count.
  int cca_epochs = 0;
  /// Stage-1 learning rate; 0 reuses the supervised learning rate.
  double cca_lr = 0.0;
  double dropout = 0.5;

  void validate() const;
};

/// -(sum of canonical correlations) of two n x k views, recorded on `tape`.
Var cca_loss(Tape& tape, Var h1, Var h2, double reg);

/// The pair of view-specific projection networks f1(X), f2(A_hat).
class DccaProjections {
 public:
  DccaProjections(SparseMatrix view1, SparseMatrix view2, DccaConfig config, std::uint64_t seed);

  ParamSet& params() noexcept { return params_; }
  const DccaConfig& config() const noexcept { return config_; }

  std::pair<Var, Var> project(Tape& tape);
  /// Negative total correlation of the current projections.
  Var loss(Tape& tape);
  /// Current total correlation (no gradients).
  double total_correlation();
  /// [f1(X) | f2(A_hat)], n x 2k.
  DenseMatrix joint_representation();

 private:
  Var project_view(Tape& tape, const SparseMatrix& input, const char* prefix);

  SparseMatrix view1_;
  SparseMatrix view2_;
  DccaConfig config_;
  ParamSet params_;
};

struct CcaTrace {
  std::vector<double> total_correlation;
};

/// Full-batch Adam on the CCA loss over every user.
CcaTrace train_projections(DccaProjections& projections, int epochs, double lr);

/// Two-stage DCCA: unsupervised projections, then a frozen-feature classifier.
struct DccaModel {
  DccaProjections projections;
  std::optional<DenseMlpModel> classifier;
  CcaTrace cca_trace;
  TrainTrace train_trace;
};

DccaModel train_dcca(const SparseMatrix& text, const SparseMatrix& a_hat,
                     const Partition& partition, const DccaConfig& config,
                     const TrainOptions& options, const DevSet* dev = nullptr);

/// Stage-2 classifier over frozen projections.
DenseMlpModel make_dcca_classifier(DccaProjections& projections, const DccaConfig& config,
                                   int num_classes, std::uint64_t seed);

}  // namespace geograph::models
