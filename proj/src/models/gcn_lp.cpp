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

#include "geograph/models/gcn_lp.hpp"

#include "geograph/errors.hpp"

namespace geograph::models {

SparseMatrix lp_inputs(const SparseMatrix& adjacency, const DenseMatrix& label_block) {
  if (label_block.cols() == 0) {
    return adjacency;
  }
  return SparseMatrix::hconcat(adjacency, SparseMatrix::from_dense(label_block));
}

namespace {

DenseMatrix initial_label_block(const Partition& p, Index num_users, LpInput input) {
  if (input == LpInput::kAdjacencyOnly) {
    return DenseMatrix(num_users, 0);
  }
  DenseMatrix block = DenseMatrix::Zero(num_users, p.num_classes);
  for (std::size_t k = 0; k < p.labeled.size(); ++k) {
    block(p.labeled[k], p.labels[k]) = 1.0;
  }
  return block;
}

}  // namespace

GcnLpModel::GcnLpModel(const SparseMatrix& adjacency, SparseMatrix a_hat,
                       const Partition& partition, GcnLpConfig config, std::uint64_t seed)
    : adjacency_(adjacency),
      config_(config),
      heldout_(partition.heldout),
      label_block_(initial_label_block(partition, adjacency.rows(), config.input)),
      gcn_(lp_inputs(adjacency, label_block_), std::move(a_hat), config.gcn, partition.num_classes,
           seed) {
  partition.validate(adjacency.rows());
}

void GcnLpModel::end_epoch(const DenseMatrix& probs, double train_accuracy) {
  if (config_.input == LpInput::kAdjacencyOnly) {
    return;
  }
  if (!feedback_active_ && train_accuracy >= config_.feedback_threshold) {
    feedback_active_ = true;
  }
  if (!feedback_active_) {
    return;
  }
  for (const Index u : heldout_) {
    label_block_.row(u) = probs.row(u);
  }
  refresh_inputs();
}

void GcnLpModel::refresh_inputs() { gcn_.set_features(lp_inputs(adjacency_, label_block_)); }

std::vector<DenseMatrix> GcnLpModel::extra_state() const {
  DenseMatrix flag(1, 1);
  flag(0, 0) = feedback_active_ ? 1.0 : 0.0;
  return {label_block_, flag};
}

void GcnLpModel::restore_extra_state(const std::vector<DenseMatrix>& state) {
  if (state.size() != 2) {
    throw DimensionError("gcn-lp: expected label block and feedback flag");
  }
  tensor::require_same_shape(label_block_, state[0], "gcn-lp label block");
  label_block_ = state[0];
  feedback_active_ = state[1](0, 0) != 0.0;
  refresh_inputs();
}

}  // namespace geograph::models
