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

#include "geograph/models/classifier.hpp"

#include <limits>
#include <random>
#include <string>

#include "geograph/errors.hpp"
#include "geograph/geo/evaluate.hpp"

namespace geograph::models {

DenseMatrix infer_logits(NodeClassifier& model) {
  Tape tape(model.params());
  Rng unused(0);
  return tape.value(model.logits(tape, Mode::kInfer, unused));
}

DenseMatrix predict_proba(NodeClassifier& model) {
  return tensor::softmax_rows(infer_logits(model));
}

std::vector<int> predict(const DenseMatrix& probs) {
  std::vector<int> out(static_cast<std::size_t>(probs.rows()), 0);
  for (Index r = 0; r < probs.rows(); ++r) {
    int best = 0;
    for (Index c = 1; c < probs.cols(); ++c) {
      if (probs(r, c) > probs(r, best)) {
        best = static_cast<int>(c);
      }
    }
    out[static_cast<std::size_t>(r)] = best;
  }
  return out;
}

double accuracy(const DenseMatrix& probs, std::span<const Index> rows, std::span<const int> labels) {
  if (rows.empty()) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Index best = 0;
    for (Index c = 1; c < probs.cols(); ++c) {
      if (probs(rows[k], c) > probs(rows[k], best)) {
        best = c;
      }
    }
    if (best == labels[k]) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

SparseMatrix sparse_dropout(const SparseMatrix& x, double p, Rng& rng) {
  std::bernoulli_distribution keep(1.0 - p);
  const double scale = 1.0 / (1.0 - p);
  std::vector<double> factors(x.nnz());
  for (auto& f : factors) {
    f = keep(rng) ? scale : 0.0;
  }
  return x.with_scaled_values(factors);
}

DenseMatrix dropout_mask(Index rows, Index cols, double p, Rng& rng) {
  std::bernoulli_distribution keep(1.0 - p);
  const double scale = 1.0 / (1.0 - p);
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    m.data()[i] = keep(rng) ? scale : 0.0;
  }
  return m;
}

Var maybe_dropout(Tape& tape, Var x, double p, Mode mode, Rng& rng) {
  if (mode != Mode::kTrain || p <= 0.0) {
    return x;
  }
  const DenseMatrix& v = tape.value(x);
  return tape.mask(x, dropout_mask(v.rows(), v.cols(), p, rng));
}

double dev_median_km(const DenseMatrix& probs, const DevSet& dev) {
  const std::vector<int> all = predict(probs);
  std::vector<int> picked;
  picked.reserve(dev.users.size());
  for (const Index u : dev.users) {
    picked.push_back(all[static_cast<std::size_t>(u)]);
  }
  return geo::median(geo::prediction_errors_km(picked, dev.points, *dev.tree));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrainTrace train_classifier(NodeClassifier& model, const Partition& partition,
                            const TrainOptions& options, const DevSet* dev) {
  if (options.epochs < 0) {
    throw ArgumentError("train: epochs must be non-negative");
  }
  if (!(options.lr > 0.0)) {
    throw ArgumentError("train: learning rate must be positive");
  }
  if (partition.labeled.empty()) {
    throw ArgumentError("train: no labelled users");
  }
  if (dev != nullptr && (dev->tree == nullptr || dev->users.size() != dev->points.size())) {
    throw ArgumentError("train: malformed dev set");
  }
  const bool use_dev = dev != nullptr && !dev->users.empty();

  Rng dropout_rng(derive_seed(options.seed, 1));
  TrainTrace trace;
  double best = std::numeric_limits<double>::infinity();
  std::vector<DenseMatrix> best_params;
  std::vector<DenseMatrix> best_extra;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    {
      Tape tape(model.params());
      const Var z = model.logits(tape, Mode::kTrain, dropout_rng);
      const Var loss = tape.softmax_cross_entropy(z, partition.labeled, partition.labels);
      tape.backward(loss);
      trace.loss.push_back(tape.value(loss)(0, 0));
    }
    tensor::adam_step(model.params(), options.lr);
    ++trace.epochs_run;

    const DenseMatrix probs = predict_proba(model);
    const double acc = accuracy(probs, partition.labeled, partition.labels);
    trace.train_accuracy.push_back(acc);
    model.end_epoch(probs, acc);

    if (use_dev) {
      const double med = dev_median_km(probs, *dev);
      trace.dev_median_km.push_back(med);
      if (med < best) {
        best = med;
        trace.best_epoch = epoch;
        best_params = model.params().snapshot();
        best_extra = model.extra_state();
      } else if (options.patience > 0 && epoch - trace.best_epoch >= options.patience) {
        break;
      }
    }
  }
  if (use_dev && trace.best_epoch >= 0) {
    model.params().restore(best_params);
    model.restore_extra_state(best_extra);
  }
  return trace;
}

}  // namespace geograph::models
