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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geograph/geo/evaluate.hpp"
#include "geograph/geo/region_tree.hpp"
#include "geograph/harness/dataset.hpp"
#include "geograph/models/checkpoint.hpp"
#include "geograph/models/classifier.hpp"
#include "geograph/models/dcca.hpp"
#include "geograph/models/gcn_lp.hpp"
#include "geograph/views/views.hpp"

namespace geograph::harness {

enum class ModelKind { kGcn, kGcnLp, kMlp, kDcca };
enum class TreeSource { kLabeled, kAllTrain };

std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view s);
std::string_view to_string(TreeSource t);
TreeSource parse_tree_source(std::string_view s);

/// Everything needed to reproduce one training run.
struct ExperimentConfig {
  ModelKind model = ModelKind::kGcn;
  int hidden = 300;
  /// Hidden graph-convolution layers (GCN and GCN-LP).
  int layers = 3;
  bool highway = true;
  double highway_bias = -1.0;
  std::size_t bucket = 50;
  /// Shrink the bucket with the labelled fraction: max(1, round(bucket * f)).
  bool scale_bucket = true;
  double labeled_fraction = 1.0;
  TreeSource tree_source = TreeSource::kLabeled;
  double dropout = 0.5;
  double lr = 1e-3;
  int epochs = 200;
  /// Early-stopping patience on dev median error; 0 trains for every epoch
  /// and never looks at dev coordinates.
  int patience = 10;
  std::uint64_t seed = 1;
  views::ViewOptions views;
  models::DccaConfig dcca;
  models::LpInput lp_input = models::LpInput::kAdjacencyAndLabels;

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Short model name used in reports: gcn, gcn-nohw, gcn-lp, gcn-lp-nohw, mlp, dcca.
std::string model_label(const ExperimentConfig& config);
/// Sets `model` and `highway` from a label produced by model_label.
void apply_model_label(std::string_view label, ExperimentConfig& config);

/// ceil(fraction * |train|) training users drawn uniformly without replacement,
/// returned in ascending order. Throws ArgumentError when that is zero users.
std::vector<Index> subsample_labels(const DatasetBundle& bundle, double fraction,
                                    std::uint64_t seed);

std::size_t effective_bucket(std::size_t bucket, double fraction, bool scale);

/// Region tree and U_S / U_H partition for one run.
struct LabelSetup {
  std::vector<Index> labeled;
  geo::RegionTree tree;
  models::Partition partition;
  std::size_t bucket = 0;
};

/// The tree sees only U_S coordinates unless `tree_source` is kAllTrain.
LabelSetup make_label_setup(const DatasetBundle& bundle, const ExperimentConfig& config);

/// A trained model together with the region tree that decodes its classes.
class TrainedModel {
 public:
  TrainedModel(ExperimentConfig config, geo::RegionTree tree, models::Partition partition);
  TrainedModel(TrainedModel&&) noexcept;
  TrainedModel& operator=(TrainedModel&&) noexcept;
  ~TrainedModel();

  const ExperimentConfig& config() const noexcept { return config_; }
  const geo::RegionTree& tree() const noexcept { return tree_; }
  const models::Partition& partition() const noexcept { return partition_; }

  /// Builds untrained networks over `views`. For DCCA only the projection
  /// networks exist until `attach_dcca_classifier` runs.
  void initialise(const views::ViewMatrices& views);

  /// Freezes the current projections as input to a fresh stage-2 classifier.
  void attach_dcca_classifier();

  models::NodeClassifier& classifier();
  models::DccaProjections* projections() noexcept { return projections_.get(); }

  /// |U| x c class probabilities.
  tensor::DenseMatrix probabilities();

  /// Every trainable tensor and piece of extra state, in a fixed order.
  std::vector<std::pair<std::string, tensor::DenseMatrix>> named_tensors();

  models::Checkpoint to_checkpoint();
  /// Rebuilds views-dependent networks and loads all tensors.
  static TrainedModel from_checkpoint(const models::Checkpoint& ckpt,
                                      const views::ViewMatrices& views);

 private:
  ExperimentConfig config_;
  geo::RegionTree tree_;
  models::Partition partition_;
  std::unique_ptr<models::DccaProjections> projections_;
  std::unique_ptr<models::NodeClassifier> classifier_;
};

struct ExperimentResult {
  TrainedModel model;
  models::TrainTrace trace;
  models::CcaTrace cca_trace;
  geo::EvalReport dev;
  geo::EvalReport test;
  std::size_t num_labeled = 0;
  double seconds = 0.0;
};

/// Metrics over the users of `split` that have coordinates.
geo::EvalReport evaluate_split(const DatasetBundle& bundle, std::span<const int> predictions,
                               const geo::RegionTree& tree, Split split);

/// Dev users with coordinates, for early stopping.
models::DevSet make_dev_set(const DatasetBundle& bundle, const geo::RegionTree& tree);

/// Subsamples labels, builds the tree, trains and evaluates one configuration.
ExperimentResult run_experiment(const DatasetBundle& bundle, const views::ViewMatrices& views,
                                const ExperimentConfig& config);

}  // namespace geograph::harness
