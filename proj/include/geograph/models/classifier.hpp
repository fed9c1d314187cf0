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

#include <cstdint>
#include <span>
#include <vector>

#include "geograph/geo/geo.hpp"
#include "geograph/geo/region_tree.hpp"
#include "geograph/models/partition.hpp"
#include "geograph/tensor/params.hpp"
#include "geograph/tensor/sparse.hpp"
#include "geograph/tensor/tape.hpp"

namespace geograph::models {

using tensor::ParamSet;
using tensor::Rng;
using tensor::SparseMatrix;
using tensor::Tape;
using tensor::Var;

enum class Mode { kTrain, kInfer };

/// A transductive classifier producing logits for every user at once.
class NodeClassifier {
 public:
  virtual ~NodeClassifier() = default;

  virtual ParamSet& params() = 0;
  virtual int num_classes() const = 0;

  /// |U| x c logits. Dropout draws from `rng` in training mode only.
  virtual Var logits(Tape& tape, Mode mode, Rng& rng) = 0;

  /// Hook run after each optimiser step with inference-mode probabilities.
  virtual void end_epoch(const DenseMatrix& /*probs*/, double /*train_accuracy*/) {}

  /// Non-parameter state that must be checkpointed alongside the parameters.
  virtual std::vector<DenseMatrix> extra_state() const { return {}; }
  virtual void restore_extra_state(const std::vector<DenseMatrix>& /*state*/) {}
};

/// Inference-mode logits without recording gradients.
DenseMatrix infer_logits(NodeClassifier& model);

/// Row-softmax of inference-mode logits.
DenseMatrix predict_proba(NodeClassifier& model);

/// Argmax per row; ties go to the lowest class id.
std::vector<int> predict(const DenseMatrix& probs);

/// Fraction of `rows` whose argmax equals the matching label.
double accuracy(const DenseMatrix& probs, std::span<const Index> rows, std::span<const int> labels);

/// Inverted dropout on stored entries: kept values are scaled by 1 / (1 - p).
SparseMatrix sparse_dropout(const SparseMatrix& x, double p, Rng& rng);

/// 0 / (1 / (1 - p)) mask of the given shape.
DenseMatrix dropout_mask(Index rows, Index cols, double p, Rng& rng);

/// Applies dropout to a tape value when training with p > 0.
Var maybe_dropout(Tape& tape, Var x, double p, Mode mode, Rng& rng);

/// Development users with known coordinates, used for model selection.
struct DevSet {
  std::vector<Index> users;
  std::vector<geo::GeoPoint> points;
  const geo::RegionTree* tree = nullptr;
};

struct TrainOptions {
  int epochs = 200;
  double lr = 1e-3;
  std::uint64_t seed = 1;
  /// Epochs without dev improvement before stopping; 0 disables early stopping.
  int patience = 10;
};

struct TrainTrace {
  std::vector<double> loss;
  std::vector<double> train_accuracy;
  std::vector<double> dev_median_km;
  /// Epoch whose parameters were retained; -1 when no dev set was given.
  int best_epoch = -1;
  int epochs_run = 0;
};

/// Full-graph training on the labelled rows with Adam and softmax cross-entropy.
///
/// With a dev set, parameters (and extra state) from the epoch with the lowest
/// dev median error are restored at the end.
TrainTrace train_classifier(NodeClassifier& model, const Partition& partition,
                            const TrainOptions& options, const DevSet* dev = nullptr);

/// Median dev error of the given probabilities.
double dev_median_km(const DenseMatrix& probs, const DevSet& dev);

/// Mixes a user-visible seed into an independent stream id.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace geograph::models
