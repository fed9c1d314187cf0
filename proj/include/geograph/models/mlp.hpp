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

#include "geograph/models/classifier.hpp"

namespace geograph::models {

struct MlpConfig {
  int hidden_size = 300;
  double dropout = 0.5;

  void validate() const;
};

/// One hidden ReLU layer then a softmax layer over a sparse input.
///
/// For MLP-TXT+NET the input is [X | A_hat]: each user's text row followed by
/// their normalised adjacency row.
class SparseMlpModel : public NodeClassifier {
 public:
  SparseMlpModel(SparseMatrix inputs, MlpConfig config, int num_classes, std::uint64_t seed);

  ParamSet& params() override { return params_; }
  int num_classes() const override { return num_classes_; }
  Var logits(Tape& tape, Mode mode, Rng& rng) override;

  const SparseMatrix& inputs() const noexcept { return inputs_; }
  const MlpConfig& config() const noexcept { return config_; }

 private:
  SparseMatrix inputs_;
  MlpConfig config_;
  int num_classes_;
  ParamSet params_;
};

/// [X | A_hat]. Throws DimensionError when the row counts differ.
SparseMatrix mlp_txt_net_inputs(const SparseMatrix& text, const SparseMatrix& a_hat);

/// Builds the concatenated input and a SparseMlpModel over it.
SparseMlpModel make_mlp_txt_net(const SparseMatrix& text, const SparseMatrix& a_hat,
                                MlpConfig config, int num_classes, std::uint64_t seed);

/// Inference-mode class probabilities of an MLP-TXT+NET model.
DenseMatrix mlp_txt_net_forward(SparseMlpModel& model);

/// One hidden ReLU layer then softmax over a fixed dense input.
class DenseMlpModel : public NodeClassifier {
 public:
  DenseMlpModel(DenseMatrix inputs, MlpConfig config, int num_classes, std::uint64_t seed);

  ParamSet& params() override { return params_; }
  int num_classes() const override { return num_classes_; }
  Var logits(Tape& tape, Mode mode, Rng& rng) override;

  const DenseMatrix& inputs() const noexcept { return inputs_; }

 private:
  DenseMatrix inputs_;
  MlpConfig config_;
  int num_classes_;
  ParamSet params_;
};

inline constexpr const char* kMlpHiddenWeight = "hidden/W";
inline constexpr const char* kMlpHiddenBias = "hidden/b";
inline constexpr const char* kMlpOutWeight = "out/W";
inline constexpr const char* kMlpOutBias = "out/b";

}  // namespace geograph::models
