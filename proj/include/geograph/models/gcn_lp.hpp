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

#include "geograph/models/gcn.hpp"

namespace geograph::models {

enum class LpInput {
  /// Adjacency rows concatenated with a c-wide label block.
  kAdjacencyAndLabels,
  /// Adjacency rows only; no label feedback.
  kAdjacencyOnly,
};

struct GcnLpConfig {
  GcnConfig gcn;
  LpInput input = LpInput::kAdjacencyAndLabels;
  /// Training accuracy at which held-out rows start receiving predictions.
  double feedback_threshold = 0.2;
};

/// [adjacency | label block] as one sparse input matrix.
SparseMatrix lp_inputs(const SparseMatrix& adjacency, const DenseMatrix& label_block);

/// Graph-convolutional label propagation.
///
/// Inputs are each user's adjacency row, optionally followed by a label block
/// holding one-hot labels for U_S. U_H rows stay zero until training accuracy
/// first reaches the feedback threshold; from then on they are refreshed every
/// epoch with the current predicted distributions.
class GcnLpModel : public NodeClassifier {
 public:
  GcnLpModel(const SparseMatrix& adjacency, SparseMatrix a_hat, const Partition& partition,
             GcnLpConfig config, std::uint64_t seed);

  ParamSet& params() override { return gcn_.params(); }
  int num_classes() const override { return gcn_.num_classes(); }
  Var logits(Tape& tape, Mode mode, Rng& rng) override { return gcn_.logits(tape, mode, rng); }
  void end_epoch(const DenseMatrix& probs, double train_accuracy) override;
  std::vector<DenseMatrix> extra_state() const override;
  void restore_extra_state(const std::vector<DenseMatrix>& state) override;

  const DenseMatrix& label_block() const noexcept { return label_block_; }
  bool feedback_active() const noexcept { return feedback_active_; }
  const SparseMatrix& inputs() const noexcept { return gcn_.features(); }
  const GcnLpConfig& config() const noexcept { return config_; }

 private:
  void refresh_inputs();

  SparseMatrix adjacency_;
  GcnLpConfig config_;
  std::vector<Index> heldout_;
  DenseMatrix label_block_;
  bool feedback_active_ = false;
  GcnModel gcn_;
};

}  // namespace geograph::models
