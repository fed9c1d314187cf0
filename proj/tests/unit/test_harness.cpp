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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "geograph/errors.hpp"
#include "geograph/harness/dataset.hpp"
#include "geograph/harness/experiment.hpp"
#include "geograph/harness/sweep.hpp"
#include "geograph/harness/synthetic.hpp"
#include "oracles.hpp"

using namespace geograph;
using namespace geograph::harness;
using nlohmann::json;

namespace {

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_users(in, "users.jsonl");
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

SyntheticConfig small_synthetic() {
  SyntheticConfig c;
  c.n_users = 200;
  c.n_regions = 2;
  c.vocab_size = 200;
  c.p_in = 0.06;
  c.p_out = 0.002;
  return c;
}

ExperimentConfig fast_config(const std::string& model) {
  ExperimentConfig c;
  apply_model_label(model, c);
  c.hidden = 16;
  c.layers = 2;
  c.epochs = 20;
  c.lr = 0.01;
  c.bucket = 40;
  c.patience = 0;
  c.dcca.proj_hidden = 8;
  c.dcca.proj_out = 4;
  c.dcca.cca_reg = 1e-3;
  return c;
}

}  // namespace

TEST_CASE("parse_users reads string and integer ids and optional fields") {
  std::istringstream in(
      R"({"id":"a","lat":1.5,"lon":2.5,"text":"hi","split":"train"})"
      "\n\n"
      R"({"id":7,"split":"test"})"
      "\n");
  const auto users = parse_users(in, "u");
  REQUIRE(users.size() == 2);
  CHECK(users[0].location == geo::GeoPoint{1.5, 2.5});
  CHECK(users[1].id == "7");
  CHECK(!users[1].location.has_value());
  CHECK(users[1].split == Split::kTest);
}

TEST_CASE("parse_users reports the offending line number") {
  const std::string ok = R"({"id":"a","lat":0,"lon":0,"split":"train"})";
  CHECK(parse_error_line(ok + "\n" + R"({"id":"b","lat":0,"lon":0})" + "\n") == 2);
  CHECK(parse_error_line(ok + "\n" + ok + "\n") == 2);
  CHECK(parse_error_line(ok + "\n\n{bad json\n") == 3);
  CHECK(parse_error_line(R"({"id":"a","split":"train"})") == 1);
  CHECK(parse_error_line(R"({"id":"a","lat":1,"split":"dev"})") == 1);
  CHECK(parse_error_line(R"({"id":"a","lat":100,"lon":0,"split":"dev"})") == 1);
  CHECK(parse_error_line(R"({"id":"a","split":"holdout"})") == 1);
}

TEST_CASE("parse_mentions requires two tab-separated columns") {
  std::istringstream good("a\tb\nc\td\n");
  CHECK(parse_mentions(good, "e").size() == 2);
  std::istringstream bad("a\tb\nc d\n");
  try {
    parse_mentions(bad, "e");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("datasets round-trip through files") {
  const auto bundle = generate_synthetic(small_synthetic());
  const auto dir = std::filesystem::temp_directory_path() / "geograph_roundtrip";
  std::filesystem::remove_all(dir);
  save_dataset(bundle, dir.string());
  const auto back = load_dataset((dir / "users.jsonl").string(), (dir / "edges.tsv").string());
  REQUIRE(back.users.size() == bundle.users.size());
  for (std::size_t i = 0; i < back.users.size(); ++i) {
    CHECK(back.users[i].id == bundle.users[i].id);
    CHECK(back.users[i].text == bundle.users[i].text);
    CHECK(back.users[i].location == bundle.users[i].location);
    CHECK(back.users[i].split == bundle.users[i].split);
  }
  CHECK(back.mentions.size() == bundle.mentions.size());
  CHECK_THROWS_AS(load_dataset((dir / "missing.jsonl").string(), (dir / "edges.tsv").string()),
                  IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("synthetic generation is deterministic per seed") {
  const auto a = generate_synthetic(small_synthetic());
  const auto b = generate_synthetic(small_synthetic());
  std::ostringstream sa;
  std::ostringstream sb;
  write_users(a, sa);
  write_mentions(a, sa);
  write_users(b, sb);
  write_mentions(b, sb);
  CHECK(sa.str() == sb.str());
  auto cfg = small_synthetic();
  cfg.seed = 2;
  std::ostringstream sc;
  write_users(generate_synthetic(cfg), sc);
  CHECK(sc.str() != sa.str());
}

TEST_CASE("synthetic generation with p_out zero has no cross-region edges") {
  auto cfg = small_synthetic();
  cfg.p_out = 0.0;
  SyntheticTruth truth;
  const auto bundle = generate_synthetic(cfg, &truth);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < bundle.users.size(); ++i) index[bundle.users[i].id] = i;
  REQUIRE(!bundle.mentions.empty());
  for (const auto& m : bundle.mentions) {
    CHECK(truth.region[index.at(m.user)] == truth.region[index.at(m.handle)]);
  }
}

TEST_CASE("synthetic regions with q one and a partitioned vocabulary use disjoint terms") {
  auto cfg = small_synthetic();
  cfg.n_regions = 3;
  cfg.region_word_weight = 1.0;
  cfg.partition_vocab = true;
  SyntheticTruth truth;
  const auto bundle = generate_synthetic(cfg, &truth);
  std::vector<std::set<std::string>> terms(3);
  for (std::size_t i = 0; i < bundle.users.size(); ++i) {
    std::istringstream words(bundle.users[i].text);
    std::string w;
    while (words >> w) terms[static_cast<std::size_t>(truth.region[i])].insert(w);
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (const auto& w : terms[static_cast<std::size_t>(a)]) {
        CHECK(terms[static_cast<std::size_t>(b)].count(w) == 0);
      }
    }
  }
}

TEST_CASE("default synthetic graph has region modularity above one half") {
  SyntheticTruth truth;
  const auto bundle = generate_synthetic(SyntheticConfig{}, &truth);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < bundle.users.size(); ++i) index[bundle.users[i].id] = i;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& m : bundle.mentions) {
    const auto u = index.at(m.user);
    const auto v = index.at(m.handle);
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  const std::vector<std::pair<std::size_t, std::size_t>> list(edges.begin(), edges.end());
  CHECK(oracle::modularity(bundle.users.size(), list, truth.region) > 0.5);
}

TEST_CASE("synthetic config validation") {
  auto cfg = small_synthetic();
  cfg.n_regions = 1;
  CHECK_THROWS_AS(generate_synthetic(cfg), ArgumentError);
  cfg = small_synthetic();
  cfg.p_out = cfg.p_in;
  CHECK_THROWS_AS(generate_synthetic(cfg), ArgumentError);
  cfg = small_synthetic();
  cfg.p_in = 1.5;
  CHECK_THROWS_AS(generate_synthetic(cfg), ArgumentError);
}

TEST_CASE("subsample_labels examples") {
  const auto bundle = generate_synthetic(small_synthetic());
  const auto train = bundle.users_in(Split::kTrain);
  CHECK(subsample_labels(bundle, 1.0, 3) == train);
  const auto part = subsample_labels(bundle, 0.1, 3);
  CHECK(part.size() == static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(train.size()))));
  CHECK(subsample_labels(bundle, 0.1, 3) == part);
  const auto dev = bundle.users_in(Split::kDev);
  for (const auto u : part) {
    CHECK(bundle.users[static_cast<std::size_t>(u)].split == Split::kTrain);
    CHECK(std::find(dev.begin(), dev.end(), u) == dev.end());
  }
  CHECK_THROWS_AS(subsample_labels(bundle, 0.0, 1), ArgumentError);
  CHECK_THROWS_AS(subsample_labels(bundle, 1.5, 1), ArgumentError);
}

TEST_CASE("bucket scaling follows the labelled fraction") {
  CHECK(effective_bucket(50, 0.01, true) == 1);
  CHECK(effective_bucket(50, 0.5, true) == 25);
  CHECK(effective_bucket(50, 0.5, false) == 50);
}

TEST_CASE("region tree depends only on the labelled users' coordinates") {
  auto bundle = generate_synthetic(small_synthetic());
  auto cfg = fast_config("gcn");
  cfg.labeled_fraction = 0.3;
  const auto a = make_label_setup(bundle, cfg);
  for (std::size_t i = 0; i < bundle.users.size(); ++i) {
    const auto u = static_cast<Index>(i);
    if (std::find(a.labeled.begin(), a.labeled.end(), u) == a.labeled.end()) {
      bundle.users[i].location = geo::GeoPoint{0.0, 0.0};
    }
  }
  const auto b = make_label_setup(bundle, cfg);
  CHECK(a.labeled == b.labeled);
  CHECK(a.tree.representatives() == b.tree.representatives());
  CHECK(a.partition.labels == b.partition.labels);
}

TEST_CASE("model labels map to configurations") {
  ExperimentConfig c;
  apply_model_label("gcn-nohw", c);
  CHECK(c.model == ModelKind::kGcn);
  CHECK(!c.highway);
  CHECK(model_label(c) == "gcn-nohw");
  apply_model_label("dcca", c);
  CHECK(c.model == ModelKind::kDcca);
  CHECK_THROWS_AS(apply_model_label("mlp-nohw", c), ArgumentError);
  CHECK_THROWS_AS(apply_model_label("svm", c), ArgumentError);
}

TEST_CASE("experiment configs round-trip through json") {
  auto c = fast_config("gcn-lp-nohw");
  c.tree_source = TreeSource::kAllTrain;
  c.views.lambda = 0.5;
  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("every model trains and round-trips through a checkpoint") {
  const auto bundle = generate_synthetic(small_synthetic());
  const auto views = build_views(bundle, views::ViewOptions{});
  for (const std::string model : {"gcn", "gcn-nohw", "gcn-lp", "mlp", "dcca"}) {
    CAPTURE(model);
    const auto cfg = fast_config(model);
    auto result = run_experiment(bundle, views, cfg);
    CHECK(result.dev.count == bundle.users_in(Split::kDev).size());
    CHECK(result.test.count == bundle.users_in(Split::kTest).size());
    const auto probs = result.model.probabilities();
    std::stringstream buf;
    models::write_checkpoint(result.model.to_checkpoint(), buf);
    auto restored = TrainedModel::from_checkpoint(models::read_checkpoint(buf), views);
    CHECK(restored.probabilities() == probs);
  }
}

TEST_CASE("checkpoints refuse a dataset with a different user count") {
  const auto bundle = generate_synthetic(small_synthetic());
  const auto views = build_views(bundle, views::ViewOptions{});
  auto result = run_experiment(bundle, views, fast_config("gcn"));
  auto cfg = small_synthetic();
  cfg.n_users = 150;
  const auto other = generate_synthetic(cfg);
  CHECK_THROWS_AS(TrainedModel::from_checkpoint(result.model.to_checkpoint(),
                                                build_views(other, views::ViewOptions{})),
                  ArgumentError);
}

TEST_CASE("zeroing held-out coordinates leaves trained parameters bit-identical") {
  const auto bundle = generate_synthetic(small_synthetic());
  const auto views = build_views(bundle, views::ViewOptions{});
  auto cfg = fast_config("gcn");
  cfg.labeled_fraction = 0.5;
  auto blind = bundle;
  const auto labeled = subsample_labels(bundle, cfg.labeled_fraction, cfg.seed);
  for (std::size_t i = 0; i < blind.users.size(); ++i) {
    if (!std::binary_search(labeled.begin(), labeled.end(), static_cast<Index>(i))) {
      blind.users[i].location = geo::GeoPoint{0.0, 0.0};
    }
  }
  auto a = run_experiment(bundle, views, cfg);
  auto b = run_experiment(blind, views, cfg);
  const auto ta = a.model.named_tensors();
  const auto tb = b.model.named_tensors();
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].first == tb[i].first);
    CHECK(ta[i].second == tb[i].second);
  }
}

TEST_CASE("sweep plans the expected cells") {
  SweepSpec spec;
  spec.synthetic = small_synthetic();
  spec.models = {"gcn"};
  spec.fractions = {0.5};
  spec.seeds = {1};
  CHECK(plan_cells(spec).size() == 1);
  spec.models = {"gcn", "gcn-nohw"};
  spec.depths = {1, 2, 3, 4, 5, 6};
  CHECK(plan_cells(spec).size() == 12);
  spec.seeds = {1, 2, 3};
  CHECK(plan_cells(spec).size() == 36);
  spec.models = {"mlp"};
  CHECK(plan_cells(spec).size() == 3);
}

TEST_CASE("sweep spec validation") {
  CHECK_THROWS_AS(SweepSpec::from_json(json{{"models", {"gcn"}}}), ArgumentError);
  CHECK_THROWS_AS(SweepSpec::from_json(json{{"synthetic", json::object()}, {"fractions", {0.0}}}),
                  ArgumentError);
  CHECK_THROWS_AS(SweepSpec::from_json(json{{"synthetic", json::object()}, {"seeds", json::array()}}),
                  ArgumentError);
  const auto s = SweepSpec::from_json(
      json{{"synthetic", {{"n_users", 50}}}, {"models", {"gcn", "mlp"}}, {"seeds", {1, 2}}});
  CHECK(s.synthetic->n_users == 50);
  CHECK(s.models.size() == 2);
}

TEST_CASE("summaries use the sample standard deviation") {
  const auto m = summarize({1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(m.mean == 3.0);
  CHECK(m.std == doctest::Approx(std::sqrt(2.5)));
  CHECK(summarize({4.0}).std == 0.0);
}

TEST_CASE("an empty report is valid json with an empty cells array") {
  const SweepReport empty;
  const auto j = json::parse(report_json(empty).dump());
  CHECK(j.at("cells").is_array());
  CHECK(j.at("cells").empty());
  CHECK(report_csv(empty) == "model,fraction,depth,seed,acc161,mean_km,median_km,seconds\n");
}

TEST_CASE("sweeps record failed cells and emit byte-stable reports") {
  SweepSpec spec;
  spec.synthetic = small_synthetic();
  spec.base = fast_config("gcn");
  spec.base.bucket = 1000;
  spec.models = {"gcn"};
  spec.fractions = {0.5};
  spec.seeds = {1};
  spec.record_timing = false;
  const auto bundle = load_sweep_data(spec);
  const auto failing = run_sweep(bundle, spec);
  REQUIRE(failing.cells.size() == 1);
  CHECK(!failing.cells[0].ok);
  CHECK(!failing.cells[0].error.empty());

  spec.base.bucket = 40;
  spec.seeds = {1, 2};
  const auto r1 = run_sweep(bundle, spec);
  const auto r2 = run_sweep(bundle, spec);
  CHECK(report_csv(r1) == report_csv(r2));
  CHECK(report_json(r1).dump() == report_json(r2).dump());
  REQUIRE(r1.aggregates.size() == 1);
  CHECK(r1.aggregates[0].runs == 2);

  const auto dir = std::filesystem::temp_directory_path() / "geograph_emit";
  std::filesystem::remove_all(dir);
  emit_report(r1, dir.string());
  std::ifstream csv(dir / "cells.csv");
  std::stringstream text;
  text << csv.rdbuf();
  CHECK(text.str() == report_csv(r1));
  CHECK(json::parse(std::ifstream(dir / "summary.json")).at("cells").size() == 2);
  std::filesystem::remove_all(dir);
}
