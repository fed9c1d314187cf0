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

#include <doctest.h>

#include <random>
#include <sstream>

#include "geograph/errors.hpp"
#include "geograph/models/checkpoint.hpp"
#include "geograph/models/classifier.hpp"
#include "geograph/models/dcca.hpp"
#include "geograph/models/gcn.hpp"
#include "geograph/models/gcn_lp.hpp"
#include "geograph/models/mlp.hpp"
#include "gradcheck.hpp"
#include "testutil.hpp"

using namespace geograph;
using namespace geograph::models;
using testsupport::Instance;
using testsupport::make_instance;

namespace {

GcnConfig small_gcn(int layers, bool highway) {
  GcnConfig c;
  c.hidden_size = 5;
  c.num_hidden_layers = layers;
  c.use_highway = highway;
  c.dropout = 0.0;
  return c;
}

testsupport::LossBuilder classifier_loss(NodeClassifier& model, const Partition& part) {
  return [&model, &part](Tape& tape) {
    Rng rng(0);
    return tape.softmax_cross_entropy(model.logits(tape, Mode::kInfer, rng), part.labeled,
                                      part.labels);
  };
}

double model_gradient_error(NodeClassifier& model, const Partition& part, std::uint64_t seed) {
  testsupport::randomize(model.params(), seed);
  return testsupport::check_gradients(model.params(), classifier_loss(model, part))
      .max_relative_error;
}

}  // namespace

TEST_CASE("model gradients match finite differences on small instances") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CAPTURE(seed);
    const Instance inst = make_instance(8, 6, 3, seed);
    GcnModel gated(inst.text, inst.a_hat, small_gcn(3, true), 3, seed);
    CHECK(model_gradient_error(gated, inst.partition, seed) <= 1e-4);
    GcnModel plain(inst.text, inst.a_hat, small_gcn(3, false), 3, seed);
    CHECK(model_gradient_error(plain, inst.partition, seed) <= 1e-4);
    auto mlp = make_mlp_txt_net(inst.text, inst.a_hat, MlpConfig{5, 0.0}, 3, seed);
    CHECK(model_gradient_error(mlp, inst.partition, seed) <= 1e-4);
  }
}

TEST_CASE("highway combine limits") {
  std::mt19937_64 rng(1);
  const auto in = testutil::random_dense(3, 4, rng);
  const auto next = testutil::random_dense(3, 4, rng);
  HighwayGate gate{DenseMatrix::Zero(4, 4), tensor::RowVector::Constant(4, 0.0)};
  const auto half = highway_combine(in, next, gate);
  CHECK((half - 0.5 * (in + next)).cwiseAbs().maxCoeff() <= 1e-15);
  gate.bias.setConstant(800.0);
  CHECK(highway_combine(in, next, gate) == next);
  gate.bias.setConstant(-800.0);
  CHECK(highway_combine(in, next, gate) == in);
}

TEST_CASE("closed gates make a deep gcn equal its shallow counterpart") {
  const Instance inst = make_instance(12, 7, 3, 5);
  GcnModel deep(inst.text, inst.a_hat, small_gcn(4, true), 3, 9);
  GcnModel shallow(inst.text, inst.a_hat, small_gcn(1, false), 3, 9);
  for (int l = 1; l < 4; ++l) {
    deep.params().value(gate_bias_name(l)).setConstant(-50.0);
  }
  for (const auto& name : {gcn_weight_name(0), gcn_bias_name(0), std::string(kGcnOutWeight),
                           std::string(kGcnOutBias)}) {
    shallow.params().value(name) = deep.params().value(name);
  }
  const auto a = infer_logits(deep);
  const auto b = infer_logits(shallow);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("gcn with an identity graph reduces to an mlp on the text") {
  const Instance inst = make_instance(8, 6, 3, 2);
  const auto eye = tensor::SparseMatrix::identity(8);
  GcnModel gcn(inst.text, eye, small_gcn(1, false), 3, 4);
  SparseMlpModel mlp(inst.text, MlpConfig{5, 0.0}, 3, 4);
  mlp.params().value(kMlpHiddenWeight) = gcn.params().value(gcn_weight_name(0));
  mlp.params().value(kMlpHiddenBias) = gcn.params().value(gcn_bias_name(0));
  mlp.params().value(kMlpOutWeight) = gcn.params().value(kGcnOutWeight);
  mlp.params().value(kMlpOutBias) = gcn.params().value(kGcnOutBias);
  CHECK((infer_logits(gcn) - infer_logits(mlp)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("training loss decreases over the first ten epochs") {
  const Instance inst = make_instance(40, 12, 2, 8, 0.1);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GcnConfig cfg = small_gcn(2, true);
    cfg.hidden_size = 16;
    GcnModel m(inst.text, inst.a_hat, cfg, 2, seed);
    TrainOptions opts;
    opts.epochs = 10;
    opts.lr = 1e-3;
    opts.seed = seed;
    opts.patience = 0;
    const auto trace = train_gcn(m, inst.partition, opts);
    REQUIRE(trace.loss.size() == 10);
    for (std::size_t e = 1; e < trace.loss.size(); ++e) {
      CHECK(trace.loss[e] < trace.loss[e - 1]);
    }
  }
}

TEST_CASE("separable features with an identity graph reach full training accuracy") {
  const Index n = 20;
  std::vector<tensor::SparseMatrix::Triplet> t;
  std::vector<Index> labeled;
  std::vector<int> labels;
  for (Index u = 0; u < n; ++u) {
    t.push_back({u, u % 2, 1.0});
    t.push_back({u, 2 + u % 3, 0.5});
    labeled.push_back(u);
    labels.push_back(static_cast<int>(u % 2));
  }
  const auto x = tensor::SparseMatrix::from_triplets(n, 5, std::move(t));
  const auto part = make_partition(n, labeled, labels, 2);
  GcnModel m(x, tensor::SparseMatrix::identity(n), small_gcn(1, false), 2, 1);
  TrainOptions opts;
  opts.epochs = 200;
  opts.lr = 0.05;
  opts.patience = 0;
  const auto trace = train_gcn(m, part, opts);
  CHECK(trace.train_accuracy.back() == 1.0);
}

TEST_CASE("zero epochs leave parameters at their initial values") {
  const Instance inst = make_instance(8, 6, 3, 3);
  GcnModel m(inst.text, inst.a_hat, small_gcn(2, true), 3, 6);
  const auto before = m.params().snapshot();
  TrainOptions opts;
  opts.epochs = 0;
  train_gcn(m, inst.partition, opts);
  const auto after = m.params().snapshot();
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i] == after[i]);
  }
}

TEST_CASE("gcn training is bit-reproducible for a fixed seed") {
  const Instance inst = make_instance(30, 10, 3, 4);
  auto run = [&] {
    GcnConfig cfg = small_gcn(2, true);
    cfg.dropout = 0.5;
    GcnModel m(inst.text, inst.a_hat, cfg, 3, 21);
    TrainOptions opts;
    opts.epochs = 15;
    opts.lr = 0.01;
    opts.seed = 21;
    opts.patience = 0;
    train_gcn(m, inst.partition, opts);
    return m.params().snapshot();
  };
  const auto a = run();
  const auto b = run();
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
  }
}

TEST_CASE("train_gcn rejects fewer than two classes") {
  const Instance inst = make_instance(8, 6, 1, 3);
  GcnModel m(inst.text, inst.a_hat, small_gcn(1, false), 1, 1);
  CHECK_THROWS_AS(train_gcn(m, inst.partition, TrainOptions{}), ArgumentError);
}

TEST_CASE("mlp-txt+net input concatenates text and normalised adjacency") {
  const auto text = tensor::SparseMatrix::from_triplets(3, 2, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 0, 1.0}});
  const auto adj = tensor::SparseMatrix::from_triplets(3, 3, {{0, 1, 1.0}, {1, 0, 1.0}});
  const auto a_hat = views::normalize_adjacency(adj, 1.0);
  const auto in = mlp_txt_net_inputs(text, a_hat);
  CHECK(in.cols() == 5);
  const auto net = in.row_cols(2);
  std::size_t net_entries = 0;
  for (const auto c : net) net_entries += c >= 2 ? 1 : 0;
  CHECK(net_entries == 1);
  CHECK(in.coeff(2, 4) == 1.0);
}

TEST_CASE("gcn-lp label block and feedback trigger") {
  const Instance inst = make_instance(8, 6, 3, 7);
  GcnLpConfig cfg;
  cfg.gcn = small_gcn(2, true);
  GcnLpModel m(inst.adjacency, inst.a_hat, inst.partition, cfg, 3);
  const auto one_hot = inst.partition.one_hot();

  auto check_labeled_rows = [&] {
    for (std::size_t i = 0; i < inst.partition.labeled.size(); ++i) {
      CHECK(m.label_block().row(inst.partition.labeled[i]) == one_hot.row(static_cast<Index>(i)));
    }
  };
  auto heldout_zero = [&] {
    for (const auto u : inst.partition.heldout) {
      if (m.label_block().row(u).cwiseAbs().sum() != 0.0) return false;
    }
    return true;
  };

  CHECK(m.inputs().cols() == 8 + 3);
  CHECK_FALSE(m.feedback_active());
  CHECK(heldout_zero());
  check_labeled_rows();

  const auto probs = predict_proba(m);
  m.end_epoch(probs, 0.19999);
  CHECK_FALSE(m.feedback_active());
  CHECK(heldout_zero());

  m.end_epoch(probs, 0.2);
  CHECK(m.feedback_active());
  for (const auto u : inst.partition.heldout) {
    CHECK(m.label_block().row(u) == probs.row(u));
  }
  check_labeled_rows();

  const auto state = m.extra_state();
  GcnLpModel copy(inst.adjacency, inst.a_hat, inst.partition, cfg, 3);
  copy.restore_extra_state(state);
  CHECK(copy.feedback_active());
  CHECK(copy.label_block() == m.label_block());
}

TEST_CASE("gcn-lp gradients match finite differences after feedback") {
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const Instance inst = make_instance(8, 6, 3, seed);
    GcnLpConfig cfg;
    cfg.gcn = small_gcn(2, true);
    GcnLpModel m(inst.adjacency, inst.a_hat, inst.partition, cfg, seed);
    m.end_epoch(predict_proba(m), 1.0);
    CHECK(model_gradient_error(m, inst.partition, seed) <= 1e-4);
  }
}

TEST_CASE("cca loss examples") {
  std::mt19937_64 rng(31);
  SUBCASE("a view with itself has correlation one per dimension") {
    ParamSet p;
    p.add("h", testutil::random_dense(50, 1, rng));
    Tape tape(p);
    const Var h = tape.param("h");
    CHECK(-tape.value(cca_loss(tape, h, h, 1e-10))(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("independent noise has total correlation near zero") {
    ParamSet p;
    p.add("a", testutil::random_dense(10000, 2, rng));
    p.add("b", testutil::random_dense(10000, 2, rng));
    Tape tape(p);
    CHECK(-tape.value(cca_loss(tape, tape.param("a"), tape.param("b"), 1e-8))(0, 0) < 0.05);
  }
  SUBCASE("permuting columns leaves the loss unchanged") {
    const auto a = testutil::random_dense(40, 2, rng);
    DenseMatrix b = testutil::random_dense(40, 2, rng);
    b.col(0) += a.col(1);
    DenseMatrix swapped(40, 2);
    swapped.col(0) = b.col(1);
    swapped.col(1) = b.col(0);
    ParamSet p;
    p.add("a", a);
    p.add("b", b);
    p.add("s", swapped);
    Tape tape(p);
    const double l1 = tape.value(cca_loss(tape, tape.param("a"), tape.param("b"), 1e-4))(0, 0);
    const double l2 = tape.value(cca_loss(tape, tape.param("a"), tape.param("s"), 1e-4))(0, 0);
    CHECK(l1 == doctest::Approx(l2).epsilon(1e-12));
  }
}

TEST_CASE("dcca gradients match finite differences in both stages") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = make_instance(8, 6, 3, seed);
    DccaConfig cfg;
    cfg.proj_hidden = 4;
    cfg.proj_out = 2;
    cfg.cca_reg = 1e-2;
    cfg.supervised_hidden = 5;
    cfg.dropout = 0.0;
    DccaProjections proj(inst.text, inst.a_hat, cfg, seed);
    testsupport::randomize(proj.params(), seed);
    CHECK(testsupport::check_gradients(proj.params(), [&](Tape& t) { return proj.loss(t); })
              .max_relative_error <= 1e-4);
    auto cls = make_dcca_classifier(proj, cfg, 3, seed);
    CHECK(cls.inputs().cols() == 2 * cfg.proj_out);
    CHECK(model_gradient_error(cls, inst.partition, seed) <= 1e-4);
  }
}

TEST_CASE("dcca config validation") {
  DccaConfig cfg;
  cfg.proj_out = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = DccaConfig{};
  cfg.cca_reg = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("predict picks the arg max with ties to the lowest class") {
  DenseMatrix p(3, 3);
  p << 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0, 0.0, 1.0, 0.2, 0.5, 0.3;
  CHECK(predict(p) == std::vector<int>{0, 2, 1});
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(make_partition(3, {0, 0}, {0, 1}, 2), ArgumentError);
  CHECK_THROWS_AS(make_partition(3, {5}, {0}, 2), ArgumentError);
  CHECK_THROWS_AS(make_partition(3, {0}, {0, 1}, 2), DimensionError);
  CHECK_THROWS_AS(make_partition(3, {0}, {2}, 2), ArgumentError);
  const auto p = make_partition(4, {3, 1}, {1, 0}, 2);
  CHECK(p.heldout == std::vector<Index>{0, 2});
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  const Instance inst = make_instance(8, 6, 3, 1);
  GcnModel m(inst.text, inst.a_hat, small_gcn(3, true), 3, 2);
  Checkpoint ckpt;
  ckpt.header = R"({"k":1})";
  ckpt.add_params("model/", m.params());
  std::stringstream buf;
  write_checkpoint(ckpt, buf);
  const auto back = read_checkpoint(buf);
  CHECK(back.header == ckpt.header);
  GcnModel other(inst.text, inst.a_hat, small_gcn(3, true), 3, 99);
  back.load_params("model/", other.params());
  CHECK(infer_logits(other) == infer_logits(m));
}

TEST_CASE("corrupt checkpoints are rejected") {
  std::stringstream bad_magic("NOTACKPT");
  CHECK_THROWS_AS(read_checkpoint(bad_magic), ParseError);

  Checkpoint ckpt;
  ckpt.tensors.emplace_back("w", DenseMatrix::Ones(3, 3));
  std::stringstream buf;
  write_checkpoint(ckpt, buf);
  const std::string full = buf.str();
  std::stringstream truncated(full.substr(0, full.size() - 5));
  CHECK_THROWS_AS(read_checkpoint(truncated), ParseError);

  ParamSet wrong;
  wrong.add("w", DenseMatrix::Ones(2, 2));
  CHECK_THROWS(ckpt.load_params("", wrong));
}
