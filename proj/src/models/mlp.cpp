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

#include "geograph/models/mlp.hpp"

#include <string>

#include "geograph/errors.hpp"

namespace geograph::models {

void MlpConfig::validate() const {
  if (hidden_size < 1) {
    throw ArgumentError("mlp: hidden size must be at least 1");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ArgumentError("mlp: dropout must be in [0, 1)");
  }
}

namespace {

ParamSet init_mlp_params(Index input_dim, int num_classes, const MlpConfig& config,
                         std::uint64_t seed) {
  config.validate();
  if (num_classes < 1) {
    throw ArgumentError("mlp: need at least one class");
  }
  Rng rng(derive_seed(seed, 0));
  ParamSet p;
  p.add(kMlpHiddenWeight, tensor::glorot_uniform(input_dim, config.hidden_size, rng));
  p.add(kMlpHiddenBias, DenseMatrix::Zero(1, config.hidden_size));
  p.add(kMlpOutWeight, tensor::glorot_uniform(config.hidden_size, num_classes, rng));
  p.add(kMlpOutBias, DenseMatrix::Zero(1, num_classes));
  return p;
}

Var output_layers(Tape& tape, Var pre_hidden, const MlpConfig& config, Mode mode, Rng& rng) {
  Var h = tape.relu(tape.add_bias(pre_hidden, tape.param(kMlpHiddenBias)));
  h = maybe_dropout(tape, h, config.dropout, mode, rng);
  return tape.add_bias(tape.matmul(h, tape.param(kMlpOutWeight)), tape.param(kMlpOutBias));
}

}  // namespace

SparseMlpModel::SparseMlpModel(SparseMatrix inputs, MlpConfig config, int num_classes,
                               std::uint64_t seed)
    : inputs_(std::move(inputs)),
      config_(config),
      num_classes_(num_classes),
      params_(init_mlp_params(inputs_.cols(), num_classes, config, seed)) {}

Var SparseMlpModel::logits(Tape& tape, Mode mode, Rng& rng) {
  const SparseMatrix& x = (mode == Mode::kTrain && config_.dropout > 0.0)
                              ? tape.hold(sparse_dropout(inputs_, config_.dropout, rng))
                              : inputs_;
  return output_layers(tape, tape.spmm(x, tape.param(kMlpHiddenWeight)), config_, mode, rng);
}

SparseMatrix mlp_txt_net_inputs(const SparseMatrix& text, const SparseMatrix& a_hat) {
  if (a_hat.rows() != a_hat.cols()) {
    throw DimensionError("mlp-txt+net: A_hat must be square");
  }
  return SparseMatrix::hconcat(text, a_hat);
}

SparseMlpModel make_mlp_txt_net(const SparseMatrix& text, const SparseMatrix& a_hat,
                                MlpConfig config, int num_classes, std::uint64_t seed) {
  return SparseMlpModel(mlp_txt_net_inputs(text, a_hat), config, num_classes, seed);
}

DenseMatrix mlp_txt_net_forward(SparseMlpModel& model) { return predict_proba(model); }

DenseMlpModel::DenseMlpModel(DenseMatrix inputs, MlpConfig config, int num_classes,
                             std::uint64_t seed)
    : inputs_(std::move(inputs)),
      config_(config),
      num_classes_(num_classes),
      params_(init_mlp_params(inputs_.cols(), num_classes, config, seed)) {}

Var DenseMlpModel::logits(Tape& tape, Mode mode, Rng& rng) {
  const Var x = maybe_dropout(tape, tape.constant(inputs_), config_.dropout, mode, rng);
  return output_layers(tape, tape.matmul(x, tape.param(kMlpHiddenWeight)), config_, mode, rng);
}

}  // namespace geograph::models
