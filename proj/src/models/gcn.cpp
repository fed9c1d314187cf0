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

#include "geograph/models/gcn.hpp"

#include "geograph/errors.hpp"

namespace geograph::models {

void GcnConfig::validate() const {
  if (hidden_size < 1) {
    throw ArgumentError("gcn: hidden size must be at least 1");
  }
  if (num_hidden_layers < 1) {
    throw ArgumentError("gcn: at least one hidden layer is required");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ArgumentError("gcn: dropout must be in [0, 1)");
  }
  if (!(lambda >= 0.0)) {
    throw ArgumentError("gcn: lambda must be non-negative");
  }
}

DenseMatrix highway_combine(const DenseMatrix& h_in, const DenseMatrix& h_new,
                            const HighwayGate& gate) {
  tensor::require_same_shape(h_in, h_new, "highway_combine");
  if (gate.weight.rows() != h_in.cols() || gate.weight.cols() != h_in.cols() ||
      gate.bias.size() != h_in.cols()) {
    throw DimensionError("highway_combine: gate is not " + std::to_string(h_in.cols()) + " wide");
  }
  const DenseMatrix t = tensor::sigmoid(tensor::dense_affine(h_in, gate.weight, gate.bias));
  return (h_new.array() * t.array() + h_in.array() * (1.0 - t.array())).matrix();
}

std::string gcn_weight_name(int layer) { return "conv" + std::to_string(layer) + "/W"; }
std::string gcn_bias_name(int layer) { return "conv" + std::to_string(layer) + "/b"; }
std::string gate_weight_name(int layer) { return "gate" + std::to_string(layer) + "/W"; }
std::string gate_bias_name(int layer) { return "gate" + std::to_string(layer) + "/b"; }

ParamSet init_gcn_params(Index input_dim, int num_classes, const GcnConfig& config, Rng& rng) {
  config.validate();
  const Index h = config.hidden_size;
  ParamSet p;
  p.add(gcn_weight_name(0), tensor::glorot_uniform(input_dim, h, rng));
  p.add(gcn_bias_name(0), DenseMatrix::Zero(1, h));
  for (int l = 1; l < config.num_hidden_layers; ++l) {
    p.add(gcn_weight_name(l), tensor::glorot_uniform(h, h, rng));
    p.add(gcn_bias_name(l), DenseMatrix::Zero(1, h));
    if (config.use_highway) {
      p.add(gate_weight_name(l), tensor::glorot_uniform(h, h, rng));
      p.add(gate_bias_name(l), DenseMatrix::Constant(1, h, config.highway_bias_init));
    }
  }
  p.add(kGcnOutWeight, tensor::glorot_uniform(h, num_classes, rng));
  p.add(kGcnOutBias, DenseMatrix::Zero(1, num_classes));
  return p;
}

Var gcn_logits(Tape& tape, const SparseMatrix& features, const SparseMatrix& a_hat,
               const GcnConfig& config, Mode mode, Rng& rng) {
  if (a_hat.rows() != a_hat.cols() || a_hat.rows() != features.rows()) {
    throw DimensionError("gcn: A_hat is " + std::to_string(a_hat.rows()) + "x" +
                         std::to_string(a_hat.cols()) + " but there are " +
                         std::to_string(features.rows()) + " feature rows");
  }
  const SparseMatrix& x = (mode == Mode::kTrain && config.dropout > 0.0)
                              ? tape.hold(sparse_dropout(features, config.dropout, rng))
                              : features;
  Var h = tape.spmm(x, tape.param(gcn_weight_name(0)));
  h = tape.relu(tape.add_bias(tape.spmm(a_hat, h), tape.param(gcn_bias_name(0))));

  for (int l = 1; l < config.num_hidden_layers; ++l) {
    const Var in = maybe_dropout(tape, h, config.dropout, mode, rng);
    Var next = tape.matmul(in, tape.param(gcn_weight_name(l)));
    next = tape.relu(tape.add_bias(tape.spmm(a_hat, next), tape.param(gcn_bias_name(l))));
    if (config.use_highway) {
      const Var gate = tape.sigmoid(
          tape.add_bias(tape.matmul(h, tape.param(gate_weight_name(l))),
                        tape.param(gate_bias_name(l))));
      next = tape.gate_combine(h, next, gate);
    }
    h = next;
  }

  const Var in = maybe_dropout(tape, h, config.dropout, mode, rng);
  const Var z = tape.matmul(in, tape.param(kGcnOutWeight));
  return tape.add_bias(tape.spmm(a_hat, z), tape.param(kGcnOutBias));
}

DenseMatrix gcn_forward(const SparseMatrix& features, const SparseMatrix& a_hat, ParamSet& params,
                        const GcnConfig& config) {
  Tape tape(params);
  Rng unused(0);
  return tensor::softmax_rows(
      tape.value(gcn_logits(tape, features, a_hat, config, Mode::kInfer, unused)));
}

GcnModel::GcnModel(SparseMatrix features, SparseMatrix a_hat, GcnConfig config, int num_classes,
                   std::uint64_t seed)
    : features_(std::move(features)),
      a_hat_(std::move(a_hat)),
      config_(config),
      num_classes_(num_classes) {
  if (num_classes < 1) {
    throw ArgumentError("gcn: need at least one class");
  }
  Rng rng(derive_seed(seed, 0));
  params_ = init_gcn_params(features_.cols(), num_classes, config_, rng);
}

Var GcnModel::logits(Tape& tape, Mode mode, Rng& rng) {
  return gcn_logits(tape, features_, a_hat_, config_, mode, rng);
}

void GcnModel::set_features(SparseMatrix features) {
  if (features.rows() != features_.rows() || features.cols() != features_.cols()) {
    throw DimensionError("gcn: replacement features change shape");
  }
  features_ = std::move(features);
}

TrainTrace train_gcn(GcnModel& model, const Partition& partition, const TrainOptions& options,
                     const DevSet* dev) {
  if (model.num_classes() < 2) {
    throw ArgumentError("train_gcn: need at least 2 classes");
  }
  partition.validate(model.features().rows());
  return train_classifier(model, partition, options, dev);
}

}  // namespace geograph::models
