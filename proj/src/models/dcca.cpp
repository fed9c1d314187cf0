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

#include "geograph/models/dcca.hpp"

#include <string>

#include "geograph/errors.hpp"

namespace geograph::models {

void DccaConfig::validate() const {
  if (proj_out < 1 || supervised_hidden < 1) {
    throw ArgumentError("dcca: layer sizes must be at least 1");
  }
  if (!linear_projection && (proj_hidden < 1 || proj_out > proj_hidden)) {
    throw ArgumentError("dcca: projection output must not exceed the hidden width");
  }
  if (!(cca_reg > 0.0)) {
    throw ArgumentError("dcca: cca_reg must be positive");
  }
  if (cca_epochs < 0 || cca_lr < 0.0) {
    throw ArgumentError("dcca: stage-1 schedule must be non-negative");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ArgumentError("dcca: dropout must be in [0, 1)");
  }
}

Var cca_loss(Tape& tape, Var h1, Var h2, double reg) { return tape.cca_loss(h1, h2, reg); }

namespace {

std::string pname(const char* prefix, const char* leaf) { return std::string(prefix) + leaf; }

void add_projection(ParamSet& p, const char* prefix, Index input_dim, const DccaConfig& c,
                    Rng& rng) {
  if (c.linear_projection) {
    p.add(pname(prefix, "out/W"), tensor::glorot_uniform(input_dim, c.proj_out, rng));
    p.add(pname(prefix, "out/b"), DenseMatrix::Zero(1, c.proj_out));
    return;
  }
  p.add(pname(prefix, "hidden/W"), tensor::glorot_uniform(input_dim, c.proj_hidden, rng));
  p.add(pname(prefix, "hidden/b"), DenseMatrix::Zero(1, c.proj_hidden));
  p.add(pname(prefix, "out/W"), tensor::glorot_uniform(c.proj_hidden, c.proj_out, rng));
  p.add(pname(prefix, "out/b"), DenseMatrix::Zero(1, c.proj_out));
}

}  // namespace

DccaProjections::DccaProjections(SparseMatrix view1, SparseMatrix view2, DccaConfig config,
                                 std::uint64_t seed)
    : view1_(std::move(view1)), view2_(std::move(view2)), config_(config) {
  config_.validate();
  if (view1_.rows() != view2_.rows()) {
    throw DimensionError("dcca: views have " + std::to_string(view1_.rows()) + " and " +
                         std::to_string(view2_.rows()) + " rows");
  }
  Rng rng(derive_seed(seed, 2));
  add_projection(params_, "f1/", view1_.cols(), config_, rng);
  add_projection(params_, "f2/", view2_.cols(), config_, rng);
}

Var DccaProjections::project_view(Tape& tape, const SparseMatrix& input, const char* prefix) {
  if (config_.linear_projection) {
    return tape.add_bias(tape.spmm(input, tape.param(pname(prefix, "out/W"))),
                         tape.param(pname(prefix, "out/b")));
  }
  const Var h = tape.sigmoid(tape.add_bias(tape.spmm(input, tape.param(pname(prefix, "hidden/W"))),
                                           tape.param(pname(prefix, "hidden/b"))));
  return tape.add_bias(tape.matmul(h, tape.param(pname(prefix, "out/W"))),
                       tape.param(pname(prefix, "out/b")));
}

std::pair<Var, Var> DccaProjections::project(Tape& tape) {
  const Var a = project_view(tape, view1_, "f1/");
  const Var b = project_view(tape, view2_, "f2/");
  return {a, b};
}

Var DccaProjections::loss(Tape& tape) {
  const auto [a, b] = project(tape);
  return cca_loss(tape, a, b, config_.cca_reg);
}

double DccaProjections::total_correlation() {
  Tape tape(params_);
  return -tape.value(loss(tape))(0, 0);
}

DenseMatrix DccaProjections::joint_representation() {
  Tape tape(params_);
  const auto [a, b] = project(tape);
  return tape.value(tape.concat_cols(a, b));
}

CcaTrace train_projections(DccaProjections& projections, int epochs, double lr) {
  if (epochs < 0 || !(lr > 0.0)) {
    throw ArgumentError("dcca: invalid stage-1 schedule");
  }
  CcaTrace trace;
  for (int e = 0; e < epochs; ++e) {
    Tape tape(projections.params());
    const Var l = projections.loss(tape);
    tape.backward(l);
    trace.total_correlation.push_back(-tape.value(l)(0, 0));
    tensor::adam_step(projections.params(), lr);
  }
  return trace;
}

DenseMlpModel make_dcca_classifier(DccaProjections& projections, const DccaConfig& config,
                                   int num_classes, std::uint64_t seed) {
  MlpConfig mlp;
  mlp.hidden_size = config.supervised_hidden;
  mlp.dropout = config.dropout;
  return DenseMlpModel(projections.joint_representation(), mlp, num_classes,
                       derive_seed(seed, 3));
}

DccaModel train_dcca(const SparseMatrix& text, const SparseMatrix& a_hat,
                     const Partition& partition, const DccaConfig& config,
                     const TrainOptions& options, const DevSet* dev) {
  partition.validate(text.rows());
  DccaModel model{DccaProjections(text, a_hat, config, options.seed), std::nullopt, {}, {}};
  const int cca_epochs = config.cca_epochs > 0 ? config.cca_epochs : options.epochs;
  const double cca_lr = config.cca_lr > 0.0 ? config.cca_lr : options.lr;
  model.cca_trace = train_projections(model.projections, cca_epochs, cca_lr);
  model.classifier.emplace(
      make_dcca_classifier(model.projections, config, partition.num_classes, options.seed));
  model.train_trace = train_classifier(*model.classifier, partition, options, dev);
  return model;
}

}  // namespace geograph::models
