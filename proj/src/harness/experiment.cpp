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

#include "geograph/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "geograph/errors.hpp"
#include "geograph/models/gcn.hpp"
#include "geograph/models/mlp.hpp"

namespace geograph::harness {

using nlohmann::json;

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::kGcn:
      return "gcn";
    case ModelKind::kGcnLp:
      return "gcn-lp";
    case ModelKind::kMlp:
      return "mlp";
    case ModelKind::kDcca:
      return "dcca";
  }
  return "gcn";
}

ModelKind parse_model_kind(std::string_view s) {
  for (auto k : {ModelKind::kGcn, ModelKind::kGcnLp, ModelKind::kMlp, ModelKind::kDcca}) {
    if (to_string(k) == s) {
      return k;
    }
  }
  throw ArgumentError("unknown model '" + std::string(s) + "' (expected gcn, gcn-lp, mlp, dcca)");
}

std::string_view to_string(TreeSource t) {
  return t == TreeSource::kLabeled ? "labeled" : "all-train";
}

TreeSource parse_tree_source(std::string_view s) {
  if (s == "labeled") return TreeSource::kLabeled;
  if (s == "all-train") return TreeSource::kAllTrain;
  throw ArgumentError("unknown tree source '" + std::string(s) + "'");
}

namespace {

std::string_view to_string(models::LpInput in) {
  return in == models::LpInput::kAdjacencyAndLabels ? "adjacency+labels" : "adjacency";
}

models::LpInput parse_lp_input(std::string_view s) {
  if (s == "adjacency+labels") return models::LpInput::kAdjacencyAndLabels;
  if (s == "adjacency") return models::LpInput::kAdjacencyOnly;
  throw ArgumentError("unknown GCN-LP input '" + std::string(s) + "'");
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) {
    out = it->get<T>();
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (hidden < 1 || layers < 1) {
    throw ArgumentError("hidden size and layer count must be at least 1");
  }
  if (bucket < 1) {
    throw ArgumentError("bucket size must be at least 1");
  }
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0)) {
    throw ArgumentError("labelled fraction must be in (0, 1]");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ArgumentError("dropout must be in [0, 1)");
  }
  if (!(lr > 0.0) || epochs < 0 || patience < 0) {
    throw ArgumentError("invalid training schedule");
  }
  if (!(views.lambda >= 0.0)) {
    throw ArgumentError("lambda must be non-negative");
  }
  if (model == ModelKind::kDcca) {
    dcca.validate();
  }
}

json ExperimentConfig::to_json() const {
  json j;
  j["model"] = std::string(harness::to_string(model));
  j["hidden"] = hidden;
  j["layers"] = layers;
  j["highway"] = highway;
  j["highway_bias"] = highway_bias;
  j["bucket"] = bucket;
  j["scale_bucket"] = scale_bucket;
  j["labeled_fraction"] = labeled_fraction;
  j["tree_from"] = std::string(harness::to_string(tree_source));
  j["dropout"] = dropout;
  j["lr"] = lr;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["seed"] = seed;
  j["lambda"] = views.lambda;
  j["min_df"] = views.text.min_df;
  j["max_df_ratio"] = views.text.max_df_ratio;
  j["max_comention_degree"] = views.max_comention_degree;
  j["mentions_from_text"] = views.mentions_from_text;
  j["lp_input"] = std::string(to_string(lp_input));
  j["dcca"] = {{"proj_hidden", dcca.proj_hidden},
               {"proj_out", dcca.proj_out},
               {"cca_reg", dcca.cca_reg},
               {"linear_projection", dcca.linear_projection},
               {"cca_epochs", dcca.cca_epochs},
               {"cca_lr", dcca.cca_lr}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  if (const auto it = j.find("model"); it != j.end()) {
    apply_model_label(it->get<std::string>(), c);
  }
  read_opt(j, "hidden", c.hidden);
  read_opt(j, "layers", c.layers);
  read_opt(j, "highway", c.highway);
  read_opt(j, "highway_bias", c.highway_bias);
  read_opt(j, "bucket", c.bucket);
  read_opt(j, "scale_bucket", c.scale_bucket);
  read_opt(j, "labeled_fraction", c.labeled_fraction);
  if (const auto it = j.find("tree_from"); it != j.end()) {
    c.tree_source = parse_tree_source(it->get<std::string>());
  }
  read_opt(j, "dropout", c.dropout);
  read_opt(j, "lr", c.lr);
  read_opt(j, "epochs", c.epochs);
  read_opt(j, "patience", c.patience);
  read_opt(j, "seed", c.seed);
  read_opt(j, "lambda", c.views.lambda);
  read_opt(j, "min_df", c.views.text.min_df);
  read_opt(j, "max_df_ratio", c.views.text.max_df_ratio);
  read_opt(j, "max_comention_degree", c.views.max_comention_degree);
  read_opt(j, "mentions_from_text", c.views.mentions_from_text);
  if (const auto it = j.find("lp_input"); it != j.end()) {
    c.lp_input = parse_lp_input(it->get<std::string>());
  }
  if (const auto it = j.find("dcca"); it != j.end()) {
    read_opt(*it, "proj_hidden", c.dcca.proj_hidden);
    read_opt(*it, "proj_out", c.dcca.proj_out);
    read_opt(*it, "cca_reg", c.dcca.cca_reg);
    read_opt(*it, "linear_projection", c.dcca.linear_projection);
    read_opt(*it, "cca_epochs", c.dcca.cca_epochs);
    read_opt(*it, "cca_lr", c.dcca.cca_lr);
  }
  return c;
}

std::string model_label(const ExperimentConfig& config) {
  std::string label(harness::to_string(config.model));
  if ((config.model == ModelKind::kGcn || config.model == ModelKind::kGcnLp) && !config.highway) {
    label += "-nohw";
  }
  return label;
}

void apply_model_label(std::string_view label, ExperimentConfig& config) {
  constexpr std::string_view kSuffix = "-nohw";
  bool highway = true;
  if (label.size() > kSuffix.size() && label.substr(label.size() - kSuffix.size()) == kSuffix) {
    label.remove_suffix(kSuffix.size());
    highway = false;
  }
  config.model = parse_model_kind(label);
  if (!highway && config.model != ModelKind::kGcn && config.model != ModelKind::kGcnLp) {
    throw ArgumentError("only gcn and gcn-lp have a -nohw variant");
  }
  config.highway = highway;
}

std::vector<Index> subsample_labels(const DatasetBundle& bundle, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ArgumentError("labelled fraction must be in (0, 1]");
  }
  std::vector<Index> train = bundle.users_in(Split::kTrain);
  const auto k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(train.size()) - 1e-9));
  if (k == 0) {
    throw ArgumentError("labelled fraction selects no training users");
  }
  std::mt19937_64 rng(models::derive_seed(seed, 4));
  std::shuffle(train.begin(), train.end(), rng);
  train.resize(k);
  std::sort(train.begin(), train.end());
  return train;
}

std::size_t effective_bucket(std::size_t bucket, double fraction, bool scale) {
  if (!scale) {
    return bucket;
  }
  const auto scaled = static_cast<long long>(std::llround(static_cast<double>(bucket) * fraction));
  return static_cast<std::size_t>(std::max<long long>(1, scaled));
}

LabelSetup make_label_setup(const DatasetBundle& bundle, const ExperimentConfig& config) {
  LabelSetup s;
  s.labeled = subsample_labels(bundle, config.labeled_fraction, config.seed);
  s.bucket = effective_bucket(config.bucket, config.labeled_fraction, config.scale_bucket);

  const std::vector<Index> tree_users = config.tree_source == TreeSource::kLabeled
                                            ? s.labeled
                                            : bundle.users_in(Split::kTrain);
  std::vector<geo::GeoPoint> points;
  points.reserve(tree_users.size());
  for (const Index u : tree_users) {
    points.push_back(*bundle.users[static_cast<std::size_t>(u)].location);
  }
  s.tree = geo::RegionTree::build(points, s.bucket);

  std::vector<int> labels;
  labels.reserve(s.labeled.size());
  for (const Index u : s.labeled) {
    labels.push_back(s.tree.assign_class(*bundle.users[static_cast<std::size_t>(u)].location));
  }
  s.partition = models::make_partition(static_cast<Index>(bundle.users.size()), s.labeled,
                                       std::move(labels), static_cast<int>(s.tree.num_classes()));
  return s;
}

TrainedModel::TrainedModel(ExperimentConfig config, geo::RegionTree tree,
                           models::Partition partition)
    : config_(std::move(config)), tree_(std::move(tree)), partition_(std::move(partition)) {}

TrainedModel::TrainedModel(TrainedModel&&) noexcept = default;
TrainedModel& TrainedModel::operator=(TrainedModel&&) noexcept = default;
TrainedModel::~TrainedModel() = default;

namespace {

models::GcnConfig gcn_config(const ExperimentConfig& c) {
  models::GcnConfig g;
  g.hidden_size = c.hidden;
  g.num_hidden_layers = c.layers;
  g.use_highway = c.highway;
  g.dropout = c.dropout;
  g.lambda = c.views.lambda;
  g.highway_bias_init = c.highway_bias;
  return g;
}

models::DccaConfig dcca_config(const ExperimentConfig& c) {
  models::DccaConfig d = c.dcca;
  d.supervised_hidden = c.hidden;
  d.dropout = c.dropout;
  return d;
}

}  // namespace

void TrainedModel::initialise(const views::ViewMatrices& views) {
  const int c = partition_.num_classes;
  switch (config_.model) {
    case ModelKind::kGcn:
      classifier_ = std::make_unique<models::GcnModel>(views.text, views.normalized,
                                                       gcn_config(config_), c, config_.seed);
      break;
    case ModelKind::kGcnLp: {
      models::GcnLpConfig lp;
      lp.gcn = gcn_config(config_);
      lp.input = config_.lp_input;
      classifier_ = std::make_unique<models::GcnLpModel>(views.adjacency, views.normalized,
                                                         partition_, lp, config_.seed);
      break;
    }
    case ModelKind::kMlp: {
      models::MlpConfig m{config_.hidden, config_.dropout};
      classifier_ = std::make_unique<models::SparseMlpModel>(
          models::make_mlp_txt_net(views.text, views.normalized, m, c, config_.seed));
      break;
    }
    case ModelKind::kDcca:
      projections_ = std::make_unique<models::DccaProjections>(views.text, views.normalized,
                                                               dcca_config(config_), config_.seed);
      classifier_.reset();
      break;
  }
}

void TrainedModel::attach_dcca_classifier() {
  if (!projections_) {
    throw StateError("attach_dcca_classifier: model is not DCCA or not initialised");
  }
  classifier_ = std::make_unique<models::DenseMlpModel>(models::make_dcca_classifier(
      *projections_, dcca_config(config_), partition_.num_classes, config_.seed));
}

models::NodeClassifier& TrainedModel::classifier() {
  if (!classifier_) {
    throw StateError("model has no classifier yet");
  }
  return *classifier_;
}

tensor::DenseMatrix TrainedModel::probabilities() { return models::predict_proba(classifier()); }

std::vector<std::pair<std::string, tensor::DenseMatrix>> TrainedModel::named_tensors() {
  models::Checkpoint tmp;
  if (projections_) {
    tmp.add_params("proj/", projections_->params());
  }
  auto& cls = classifier();
  tmp.add_params("model/", cls.params());
  const auto extra = cls.extra_state();
  for (std::size_t i = 0; i < extra.size(); ++i) {
    tmp.tensors.emplace_back("state/" + std::to_string(i), extra[i]);
  }
  return std::move(tmp.tensors);
}

namespace {

json tree_to_json(const geo::RegionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    nodes.push_back({n.axis == geo::SplitAxis::kLat ? "lat" : "lon", n.split, n.left, n.right,
                     n.leaf_class});
  }
  json reps = json::array();
  for (const auto& p : tree.representatives()) {
    reps.push_back({p.lat, p.lon});
  }
  return {{"bucket", tree.bucket_size()}, {"nodes", nodes}, {"representatives", reps}};
}

geo::RegionTree tree_from_json(const json& j) {
  std::vector<geo::RegionTree::Node> nodes;
  for (const auto& n : j.at("nodes")) {
    geo::RegionTree::Node node;
    node.axis = n.at(0).get<std::string>() == "lat" ? geo::SplitAxis::kLat : geo::SplitAxis::kLon;
    node.split = n.at(1).get<double>();
    node.left = n.at(2).get<int>();
    node.right = n.at(3).get<int>();
    node.leaf_class = n.at(4).get<int>();
    nodes.push_back(node);
  }
  std::vector<geo::GeoPoint> reps;
  for (const auto& p : j.at("representatives")) {
    reps.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return geo::RegionTree::from_parts(std::move(nodes), std::move(reps),
                                     j.at("bucket").get<std::size_t>());
}

}  // namespace

models::Checkpoint TrainedModel::to_checkpoint() {
  json header;
  header["format"] = "geograph-checkpoint";
  header["config"] = config_.to_json();
  header["tree"] = tree_to_json(tree_);
  header["partition"] = {{"labeled", partition_.labeled},
                         {"labels", partition_.labels},
                         {"num_classes", partition_.num_classes}};
  header["num_users"] = partition_.labeled.size() + partition_.heldout.size();
  models::Checkpoint ckpt;
  ckpt.header = header.dump();
  ckpt.tensors = named_tensors();
  return ckpt;
}

TrainedModel TrainedModel::from_checkpoint(const models::Checkpoint& ckpt,
                                           const views::ViewMatrices& views) {
  json header;
  try {
    header = json::parse(ckpt.header);
  } catch (const json::parse_error& e) {
    throw ParseError("checkpoint", 0, std::string("invalid header: ") + e.what());
  }
  if (header.value("format", "") != "geograph-checkpoint") {
    throw ParseError("checkpoint", 0, "not a geograph checkpoint");
  }
  const auto num_users = header.at("num_users").get<Index>();
  if (num_users != views.num_users()) {
    throw ArgumentError("checkpoint was trained on " + std::to_string(num_users) +
                        " users but the dataset has " + std::to_string(views.num_users()));
  }
  ExperimentConfig config = ExperimentConfig::from_json(header.at("config"));
  const json& p = header.at("partition");
  models::Partition partition = models::make_partition(
      num_users, p.at("labeled").get<std::vector<Index>>(), p.at("labels").get<std::vector<int>>(),
      p.at("num_classes").get<int>());

  TrainedModel m(std::move(config), tree_from_json(header.at("tree")), std::move(partition));
  m.initialise(views);
  if (m.projections_) {
    ckpt.load_params("proj/", m.projections_->params());
    m.attach_dcca_classifier();
  }
  auto& cls = m.classifier();
  ckpt.load_params("model/", cls.params());
  std::vector<tensor::DenseMatrix> extra;
  for (std::size_t i = 0; ckpt.contains("state/" + std::to_string(i)); ++i) {
    extra.push_back(ckpt.tensor("state/" + std::to_string(i)));
  }
  if (!extra.empty()) {
    cls.restore_extra_state(extra);
  }
  return m;
}

geo::EvalReport evaluate_split(const DatasetBundle& bundle, std::span<const int> predictions,
                               const geo::RegionTree& tree, Split split) {
  std::vector<int> picked;
  std::vector<geo::GeoPoint> truth;
  for (std::size_t i = 0; i < bundle.users.size(); ++i) {
    const auto& u = bundle.users[i];
    if (u.split == split && u.location) {
      picked.push_back(predictions[i]);
      truth.push_back(*u.location);
    }
  }
  return geo::evaluate(picked, truth, tree);
}

models::DevSet make_dev_set(const DatasetBundle& bundle, const geo::RegionTree& tree) {
  models::DevSet dev;
  dev.tree = &tree;
  for (std::size_t i = 0; i < bundle.users.size(); ++i) {
    const auto& u = bundle.users[i];
    if (u.split == Split::kDev && u.location) {
      dev.users.push_back(static_cast<Index>(i));
      dev.points.push_back(*u.location);
    }
  }
  return dev;
}

ExperimentResult run_experiment(const DatasetBundle& bundle, const views::ViewMatrices& views,
                                const ExperimentConfig& config) {
  config.validate();
  if (views.num_users() != static_cast<Index>(bundle.users.size())) {
    throw DimensionError("views and dataset disagree on the user count");
  }
  if (config.model == ModelKind::kDcca &&
      static_cast<Index>(config.dcca.proj_out) >= views.num_users()) {
    throw ArgumentError("DCCA projection width " + std::to_string(config.dcca.proj_out) +
                        " needs more than that many users (have " +
                        std::to_string(views.num_users()) + ")");
  }
  const auto start = std::chrono::steady_clock::now();
  LabelSetup setup = make_label_setup(bundle, config);
  if (setup.tree.num_classes() < 2) {
    throw ArgumentError("only " + std::to_string(setup.tree.num_classes()) +
                        " region(s); lower the bucket size or raise the labelled fraction");
  }

  ExperimentResult r{TrainedModel(config, setup.tree, setup.partition), {}, {}, {}, {}, 0, 0.0};
  r.num_labeled = setup.labeled.size();
  TrainedModel& m = r.model;
  m.initialise(views);

  models::TrainOptions options;
  options.epochs = config.epochs;
  options.lr = config.lr;
  options.seed = config.seed;
  options.patience = config.patience;
  const models::DevSet dev = make_dev_set(bundle, m.tree());
  const models::DevSet* dev_ptr = config.patience > 0 ? &dev : nullptr;

  if (config.model == ModelKind::kDcca) {
    const auto& d = config.dcca;
    r.cca_trace = models::train_projections(*m.projections(),
                                            d.cca_epochs > 0 ? d.cca_epochs : config.epochs,
                                            d.cca_lr > 0.0 ? d.cca_lr : config.lr);
    m.attach_dcca_classifier();
  }
  r.trace = models::train_classifier(m.classifier(), m.partition(), options, dev_ptr);

  const auto probs = m.probabilities();
  const auto preds = models::predict(probs);
  r.dev = evaluate_split(bundle, preds, m.tree(), Split::kDev);
  r.test = evaluate_split(bundle, preds, m.tree(), Split::kTest);
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace geograph::harness
