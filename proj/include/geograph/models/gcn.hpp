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

#include <string>

#include "geograph/models/classifier.hpp"

namespace geograph::models {

struct GcnConfig {
  /// Width shared by every hidden layer.
  int hidden_size = 300;
  int num_hidden_layers = 3;
  bool use_highway = true;
  double dropout = 0.5;
  double lambda = 1.0;
  /// Initial transform-gate bias; negative values favour carrying the input.
  double highway_bias_init = -1.0;

  void validate() const;
};

/// Transform gate T(h) = sigmoid(h W_t + b_t) of one hidden layer.
struct HighwayGate {
  DenseMatrix weight;
  tensor::RowVector bias;
};

/// h_new * T(h_in) + h_in * (1 - T(h_in)).
DenseMatrix highway_combine(const DenseMatrix& h_in, const DenseMatrix& h_new,
                            const HighwayGate& gate);

/// Parameter names, shared with checkpoints.
std::string gcn_weight_name(int layer);
std::string gcn_bias_name(int layer);
std::string gate_weight_name(int layer);
std::string gate_bias_name(int layer);
inline constexpr const char* kGcnOutWeight = "out/W";
inline constexpr const char* kGcnOutBias = "out/b";

/// Glorot weights, zero biases, gate biases at `highway_bias_init`.
ParamSet init_gcn_params(Index input_dim, int num_classes, const GcnConfig& config, Rng& rng);

/// Records the layer stack on `tape` and returns |U| x c logits.
///
/// Layer 0 maps the input to the hidden width without a gate. Layers
/// 1..L-1 are hidden-to-hidden graph convolutions, each combined with its
/// input through a highway gate when enabled. The output layer is also a
/// graph convolution, so a user's logits depend on users up to L + 1 hops away.
Var gcn_logits(Tape& tape, const SparseMatrix& features, const SparseMatrix& a_hat,
               const GcnConfig& config, Mode mode, Rng& rng);

/// Inference-mode class probabilities.
DenseMatrix gcn_forward(const SparseMatrix& features, const SparseMatrix& a_hat, ParamSet& params,
                        const GcnConfig& config);

class GcnModel : public NodeClassifier {
 public:
  GcnModel(SparseMatrix features, SparseMatrix a_hat, GcnConfig config, int num_classes,
           std::uint64_t seed);

  ParamSet& params() override { return params_; }
  int num_classes() const override { return num_classes_; }
  Var logits(Tape& tape, Mode mode, Rng& rng) override;

  const GcnConfig& config() const noexcept { return config_; }
  const SparseMatrix& features() const noexcept { return features_; }
  const SparseMatrix& a_hat() const noexcept { return a_hat_; }
  void set_features(SparseMatrix features);

 private:
  SparseMatrix features_;
  SparseMatrix a_hat_;
  GcnConfig config_;
  int num_classes_;
  ParamSet params_;
};

/// Trains a GCN on the text view. Throws ArgumentError for fewer than 2 classes.
TrainTrace train_gcn(GcnModel& model, const Partition& partition, const TrainOptions& options,
                     const DevSet* dev = nullptr);

}  // namespace geograph::models
