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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "geograph/errors.hpp"
#include "geograph/geo/evaluate.hpp"
#include "geograph/harness/dataset.hpp"
#include "geograph/harness/experiment.hpp"
#include "geograph/harness/sweep.hpp"
#include "geograph/harness/synthetic.hpp"
#include "geograph/models/checkpoint.hpp"

namespace gh = geograph::harness;
namespace gm = geograph::models;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct TrainArgs {
  std::string users;
  std::string edges;
  std::string model = "gcn";
  bool no_highway = false;
  std::string tree_from = "labeled";
  bool no_bucket_scaling = false;
  std::string out;
  bool quiet = false;
  gh::ExperimentConfig config;
};

struct EvalArgs {
  std::string checkpoint;
  std::string users;
  std::string edges;
  std::string per_class;
};

json eval_json(const geograph::geo::EvalReport& r) {
  return {{"count", r.count},
          {"acc161", r.acc161},
          {"mean_km", r.mean_km},
          {"median_km", r.median_km}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw geograph::IoError("cannot write '" + path.string() + "'");
  }
}

void write_per_class(const std::filesystem::path& path, const geograph::geo::EvalReport& r) {
  std::ofstream out(path, std::ios::binary);
  geograph::geo::write_per_class_csv(r, out);
  if (!out) {
    throw geograph::IoError("cannot write '" + path.string() + "'");
  }
}

void run_train(TrainArgs& args) {
  gh::ExperimentConfig& config = args.config;
  gh::apply_model_label(args.model, config);
  if (args.no_highway) {
    if (config.model != gh::ModelKind::kGcn && config.model != gh::ModelKind::kGcnLp) {
      throw geograph::ArgumentError("--no-highway applies only to gcn and gcn-lp");
    }
    config.highway = false;
  }
  config.tree_source = gh::parse_tree_source(args.tree_from);
  config.scale_bucket = !args.no_bucket_scaling;
  config.validate();

  const auto bundle = gh::load_dataset(args.users, args.edges);
  const auto views = gh::build_views(bundle, config.views);
  if (!args.quiet) {
    std::cerr << "loaded " << bundle.users.size() << " users, " << bundle.mentions.size()
              << " mention lines\n"
              << geograph::views::describe(views) << '\n';
  }
  auto result = gh::run_experiment(bundle, views, config);

  const std::filesystem::path out(args.out);
  std::filesystem::create_directories(out);
  gm::save_checkpoint(result.model.to_checkpoint(), (out / "model.ckpt").string());

  json report = {{"config", config.to_json()},
                 {"model", gh::model_label(config)},
                 {"num_labeled", result.num_labeled},
                 {"num_classes", result.model.tree().num_classes()},
                 {"epochs_run", result.trace.epochs_run},
                 {"best_epoch", result.trace.best_epoch},
                 {"final_loss", result.trace.loss.empty() ? 0.0 : result.trace.loss.back()},
                 {"dev", eval_json(result.dev)},
                 {"test", eval_json(result.test)},
                 {"seconds", result.seconds}};
  if (!result.cca_trace.total_correlation.empty()) {
    report["final_total_correlation"] = result.cca_trace.total_correlation.back();
  }
  write_text(out / "report.json", report.dump(2) + "\n");

  gh::SweepReport single;
  gh::SweepCell cell;
  cell.model = gh::model_label(config);
  cell.fraction = config.labeled_fraction;
  cell.depth = config.layers;
  cell.seed = config.seed;
  cell.ok = true;
  cell.dev = result.dev;
  cell.test = result.test;
  cell.seconds = result.seconds;
  single.cells.push_back(cell);
  write_text(out / "report.csv", gh::report_csv(single));
  write_per_class(out / "per_class.csv", result.test);

  std::cout << gh::model_label(config) << ": dev acc161=" << result.dev.acc161
            << " mean=" << result.dev.mean_km << "km median=" << result.dev.median_km
            << "km | test acc161=" << result.test.acc161 << " mean=" << result.test.mean_km
            << "km median=" << result.test.median_km << "km\n";
}

void run_eval(const EvalArgs& args) {
  const auto ckpt = gm::load_checkpoint(args.checkpoint);
  json header;
  try {
    header = json::parse(ckpt.header);
  } catch (const json::parse_error& e) {
    throw geograph::ParseError(args.checkpoint, 0, e.what());
  }
  const auto config = gh::ExperimentConfig::from_json(header.at("config"));
  const auto bundle = gh::load_dataset(args.users, args.edges);
  const auto views = gh::build_views(bundle, config.views);
  auto model = gh::TrainedModel::from_checkpoint(ckpt, views);
  const auto preds = gm::predict(model.probabilities());
  const auto dev = gh::evaluate_split(bundle, preds, model.tree(), gh::Split::kDev);
  const auto test = gh::evaluate_split(bundle, preds, model.tree(), gh::Split::kTest);
  if (!args.per_class.empty()) {
    write_per_class(args.per_class, test);
  }
  const json out = {{"model", gh::model_label(config)},
                    {"dev", eval_json(dev)},
                    {"test", eval_json(test)}};
  std::cout << out.dump(2) << '\n';
}

void run_sweep_command(const std::string& spec_path, const std::string& out_override,
                       bool quiet) {
  auto spec = gh::SweepSpec::load(spec_path);
  if (!out_override.empty()) {
    spec.out_dir = out_override;
  }
  if (spec.out_dir.empty()) {
    throw geograph::ArgumentError("sweep spec has no \"out\" directory and --out was not given");
  }
  const auto bundle = gh::load_sweep_data(spec);
  const auto report = gh::run_sweep(
      bundle, spec, [quiet](const gh::SweepCell& c, std::size_t i, std::size_t n) {
        if (quiet) {
          return;
        }
        std::cerr << '[' << (i + 1) << '/' << n << "] " << c.model << " f=" << c.fraction
                  << " depth=" << c.depth << " seed=" << c.seed << ": ";
        if (c.ok) {
          std::cerr << "dev median " << c.dev.median_km << " km\n";
        } else {
          std::cerr << "FAILED " << c.error << '\n';
        }
      });
  gh::emit_report(report, spec.out_dir);
  std::size_t failed = 0;
  for (const auto& c : report.cells) {
    failed += c.ok ? 0 : 1;
  }
  std::cout << report.cells.size() << " cells, " << failed << " failed; report in "
            << spec.out_dir << '\n';
}

void run_synth(const gh::SyntheticConfig& config, const std::string& out) {
  config.validate();
  const auto bundle = gh::generate_synthetic(config);
  gh::save_dataset(bundle, out);
  std::cout << "wrote " << bundle.users.size() << " users and " << bundle.mentions.size()
            << " mentions to " << out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised user geolocation over text and mention graphs"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output on stderr");

  TrainArgs train;
  auto& tc = train.config;
  auto* cmd_train = app.add_subcommand("train", "Train one model and write checkpoint and report");
  cmd_train->add_option("--users", train.users, "Users file (JSON lines)")->required();
  cmd_train->add_option("--edges", train.edges, "Mentions file (two-column TSV)")->required();
  cmd_train->add_option("--model", train.model, "gcn, gcn-lp, mlp or dcca")
      ->check(CLI::IsMember({"gcn", "gcn-lp", "mlp", "dcca"}));
  cmd_train->add_option("--hidden", tc.hidden, "Hidden width")->capture_default_str();
  cmd_train->add_option("--layers", tc.layers, "Number of hidden GCN layers")
      ->capture_default_str();
  cmd_train->add_flag("--no-highway", train.no_highway, "Disable highway gates");
  cmd_train->add_option("--highway-bias", tc.highway_bias, "Initial gate bias")
      ->capture_default_str();
  cmd_train->add_option("--bucket", tc.bucket, "Maximum users per region")->capture_default_str();
  cmd_train->add_flag("--no-bucket-scaling", train.no_bucket_scaling,
                      "Use --bucket as is instead of scaling it by the labelled fraction");
  cmd_train->add_option("--tree-from", train.tree_from, "Region tree points: labeled or all-train")
      ->check(CLI::IsMember({"labeled", "all-train"}))
      ->capture_default_str();
  cmd_train->add_option("--labeled-fraction", tc.labeled_fraction, "Fraction of train users labelled")
      ->capture_default_str();
  cmd_train->add_option("--lambda", tc.views.lambda, "Self-loop weight")->capture_default_str();
  cmd_train->add_option("--dropout", tc.dropout, "Dropout rate")->capture_default_str();
  cmd_train->add_option("--lr", tc.lr, "Adam learning rate")->capture_default_str();
  cmd_train->add_option("--epochs", tc.epochs, "Maximum epochs")->capture_default_str();
  cmd_train->add_option("--patience", tc.patience, "Early-stopping patience (0 disables)")
      ->capture_default_str();
  cmd_train->add_option("--seed", tc.seed, "Random seed")->capture_default_str();
  cmd_train->add_option("--cca-epochs", tc.dcca.cca_epochs, "DCCA projection epochs (0: --epochs)");
  cmd_train->add_option("--cca-lr", tc.dcca.cca_lr, "DCCA projection learning rate (0: --lr)");
  cmd_train->add_option("--proj-hidden", tc.dcca.proj_hidden, "DCCA projection hidden width")
      ->capture_default_str();
  cmd_train->add_option("--proj-out", tc.dcca.proj_out, "DCCA projection output width")
      ->capture_default_str();
  cmd_train->add_option("--cca-reg", tc.dcca.cca_reg, "CCA covariance regulariser")
      ->capture_default_str();
  cmd_train->add_option("--out", train.out, "Output directory")->required();

  std::string sweep_spec;
  std::string sweep_out;
  auto* cmd_sweep = app.add_subcommand("sweep", "Run a grid of experiments from a JSON spec");
  cmd_sweep->add_option("--spec", sweep_spec, "Sweep spec file")->required();
  cmd_sweep->add_option("--out", sweep_out, "Override the report directory");

  gh::SyntheticConfig synth;
  std::string synth_out;
  auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  cmd_synth->add_option("--out", synth_out, "Output directory")->required();
  cmd_synth->add_option("--users", synth.n_users, "Number of users")->capture_default_str();
  cmd_synth->add_option("--regions", synth.n_regions, "Number of regions")->capture_default_str();
  cmd_synth->add_option("--vocab", synth.vocab_size, "Vocabulary size")->capture_default_str();
  cmd_synth->add_option("--p-in", synth.p_in, "Within-region edge probability")
      ->capture_default_str();
  cmd_synth->add_option("--p-out", synth.p_out, "Cross-region edge probability")
      ->capture_default_str();
  cmd_synth->add_option("--words", synth.words_per_user, "Words per user")->capture_default_str();
  cmd_synth->add_option("--region-word-weight", synth.region_word_weight,
                        "Probability a word is region-specific")
      ->capture_default_str();
  cmd_synth->add_option("--jitter", synth.jitter_deg, "Coordinate jitter in degrees")
      ->capture_default_str();
  cmd_synth->add_option("--spacing", synth.region_spacing_deg, "Region grid spacing in degrees")
      ->capture_default_str();
  cmd_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  cmd_eval->add_option("--model", eval.checkpoint, "Checkpoint file")->required();
  cmd_eval->add_option("--users", eval.users, "Users file (JSON lines)")->required();
  cmd_eval->add_option("--edges", eval.edges, "Mentions file (two-column TSV)")->required();
  cmd_eval->add_option("--per-class", eval.per_class, "Write the per-class test breakdown here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    train.quiet = quiet;
    if (*cmd_train) {
      run_train(train);
    } else if (*cmd_sweep) {
      run_sweep_command(sweep_spec, sweep_out, quiet);
    } else if (*cmd_synth) {
      run_synth(synth, synth_out);
    } else if (*cmd_eval) {
      run_eval(eval);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const geograph::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
