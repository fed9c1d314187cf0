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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geograph/harness/dataset.hpp"
#include "geograph/harness/experiment.hpp"
#include "geograph/harness/synthetic.hpp"

namespace geograph::harness {

/// Grid of experiments: every (model, fraction, depth, seed) combination.
///
/// Model labels are those accepted by `apply_model_label` (gcn, gcn-nohw,
/// gcn-lp, gcn-lp-nohw, mlp, dcca). Depths apply only to the GCN family; MLP
/// and DCCA cells are run once per (fraction, seed) with depth 1.
struct SweepSpec {
  std::optional<SyntheticConfig> synthetic;
  std::string users_path;
  std::string edges_path;
  ExperimentConfig base;
  std::vector<std::string> models{"gcn"};
  std::vector<double> fractions{1.0};
  std::vector<std::uint64_t> seeds{1};
  std::vector<int> depths;
  /// When false every `seconds` field is written as 0 so reports are
  /// byte-stable across runs.
  bool record_timing = true;
  std::string out_dir;

  void validate() const;
  /// Relative data paths are resolved against `base_dir`.
  static SweepSpec from_json(const nlohmann::json& j, const std::string& base_dir = "");
  static SweepSpec load(const std::string& path);
};

struct SweepCell {
  std::string model;
  double fraction = 1.0;
  int depth = 1;
  std::uint64_t seed = 1;
  bool ok = false;
  std::string error;
  std::size_t num_labeled = 0;
  std::size_t num_classes = 0;
  geo::EvalReport dev;
  geo::EvalReport test;
  double seconds = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and sample standard deviation over the successful seeds of one cell.
struct SweepAggregate {
  std::string model;
  double fraction = 1.0;
  int depth = 1;
  std::size_t runs = 0;
  std::size_t failures = 0;
  MetricSummary dev_acc161;
  MetricSummary dev_mean_km;
  MetricSummary dev_median_km;
  MetricSummary test_acc161;
  MetricSummary test_mean_km;
  MetricSummary test_median_km;
};

struct SweepReport {
  nlohmann::json config;
  std::vector<SweepCell> cells;
  std::vector<SweepAggregate> aggregates;
  bool record_timing = true;
};

MetricSummary summarize(const std::vector<double>& values);

/// Generates the synthetic bundle or loads the files named by the spec.
DatasetBundle load_sweep_data(const SweepSpec& spec);

SyntheticConfig synthetic_from_json(const nlohmann::json& j);
nlohmann::json synthetic_to_json(const SyntheticConfig& config);

/// Cells in the order they are run: model, fraction, depth, seed.
std::vector<SweepCell> plan_cells(const SweepSpec& spec);

using SweepProgress = std::function<void(const SweepCell&, std::size_t index, std::size_t total)>;

/// Runs every cell sequentially. A cell that throws is recorded as failed
/// with its message and the sweep continues.
SweepReport run_sweep(const DatasetBundle& bundle, const SweepSpec& spec,
                      const SweepProgress& progress = {});

std::vector<SweepAggregate> aggregate(const std::vector<SweepCell>& cells);

nlohmann::json report_json(const SweepReport& report);
/// Long-format CSV of dev metrics, one row per cell.
std::string report_csv(const SweepReport& report);
/// Writes summary.json and cells.csv into `dir`, creating it if needed.
void emit_report(const SweepReport& report, const std::string& dir);

}  // namespace geograph::harness
