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

#include "geograph/harness/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "geograph/errors.hpp"

namespace geograph::harness {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) {
    out = it->get<T>();
  }
}

bool is_gcn_family(const std::string& label) {
  ExperimentConfig c;
  apply_model_label(label, c);
  return c.model == ModelKind::kGcn || c.model == ModelKind::kGcnLp;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(base_dir) / path).string();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json eval_json(const geo::EvalReport& r) {
  return {{"count", r.count},
          {"acc161", r.acc161},
          {"mean_km", r.mean_km},
          {"median_km", r.median_km}};
}

json summary_json(const MetricSummary& m) { return {{"mean", m.mean}, {"std", m.std}}; }

}  // namespace

SyntheticConfig synthetic_from_json(const json& j) {
  SyntheticConfig c;
  read_opt(j, "n_users", c.n_users);
  read_opt(j, "n_regions", c.n_regions);
  read_opt(j, "vocab_size", c.vocab_size);
  read_opt(j, "p_in", c.p_in);
  read_opt(j, "p_out", c.p_out);
  read_opt(j, "words_per_user", c.words_per_user);
  read_opt(j, "region_word_weight", c.region_word_weight);
  read_opt(j, "partition_vocab", c.partition_vocab);
  read_opt(j, "jitter_deg", c.jitter_deg);
  read_opt(j, "region_spacing_deg", c.region_spacing_deg);
  read_opt(j, "train_fraction", c.train_fraction);
  read_opt(j, "dev_fraction", c.dev_fraction);
  read_opt(j, "seed", c.seed);
  c.validate();
  return c;
}

json synthetic_to_json(const SyntheticConfig& c) {
  return {{"n_users", c.n_users},
          {"n_regions", c.n_regions},
          {"vocab_size", c.vocab_size},
          {"p_in", c.p_in},
          {"p_out", c.p_out},
          {"words_per_user", c.words_per_user},
          {"region_word_weight", c.region_word_weight},
          {"partition_vocab", c.partition_vocab},
          {"jitter_deg", c.jitter_deg},
          {"region_spacing_deg", c.region_spacing_deg},
          {"train_fraction", c.train_fraction},
          {"dev_fraction", c.dev_fraction},
          {"seed", c.seed}};
}

void SweepSpec::validate() const {
  if (!synthetic && (users_path.empty() || edges_path.empty())) {
    throw ArgumentError("sweep spec needs either a synthetic block or users and edges paths");
  }
  if (models.empty() || fractions.empty() || seeds.empty()) {
    throw ArgumentError("sweep spec needs at least one model, fraction and seed");
  }
  for (const auto& m : models) {
    ExperimentConfig c;
    apply_model_label(m, c);
  }
  for (const double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw ArgumentError("sweep fractions must lie in (0, 1]");
    }
  }
  for (const int d : depths) {
    if (d < 1) {
      throw ArgumentError("sweep depths must be at least 1");
    }
  }
  base.validate();
}

SweepSpec SweepSpec::from_json(const json& j, const std::string& base_dir) {
  SweepSpec s;
  try {
    if (const auto it = j.find("synthetic"); it != j.end()) {
      s.synthetic = synthetic_from_json(*it);
    }
    if (const auto it = j.find("data"); it != j.end()) {
      s.users_path = resolve(it->at("users").get<std::string>(), base_dir);
      s.edges_path = resolve(it->at("edges").get<std::string>(), base_dir);
    }
    if (const auto it = j.find("base"); it != j.end()) {
      s.base = ExperimentConfig::from_json(*it);
    }
    read_opt(j, "models", s.models);
    read_opt(j, "fractions", s.fractions);
    read_opt(j, "seeds", s.seeds);
    read_opt(j, "depths", s.depths);
    read_opt(j, "record_timing", s.record_timing);
    if (const auto it = j.find("out"); it != j.end()) {
      s.out_dir = resolve(it->get<std::string>(), base_dir);
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid sweep spec: ") + e.what());
  }
  s.validate();
  return s;
}

SweepSpec SweepSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open sweep spec '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
  return from_json(j, std::filesystem::path(path).parent_path().string());
}

DatasetBundle load_sweep_data(const SweepSpec& spec) {
  if (spec.synthetic) {
    return generate_synthetic(*spec.synthetic);
  }
  return load_dataset(spec.users_path, spec.edges_path);
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary m;
  if (values.empty()) {
    return m;
  }
  double sum = 0.0;
  for (const double v : values) {
    sum += v;
  }
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) {
      ss += (v - m.mean) * (v - m.mean);
    }
    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

std::vector<SweepCell> plan_cells(const SweepSpec& spec) {
  std::vector<SweepCell> cells;
  for (const auto& model : spec.models) {
    std::vector<int> depths{spec.base.layers};
    if (!spec.depths.empty()) {
      depths = is_gcn_family(model) ? spec.depths : std::vector<int>{1};
    }
    for (const double f : spec.fractions) {
      for (const int d : depths) {
        for (const auto seed : spec.seeds) {
          SweepCell c;
          c.model = model;
          c.fraction = f;
          c.depth = d;
          c.seed = seed;
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

SweepReport run_sweep(const DatasetBundle& bundle, const SweepSpec& spec,
                      const SweepProgress& progress) {
  spec.validate();
  SweepReport report;
  report.record_timing = spec.record_timing;
  report.config = {{"base", spec.base.to_json()},
                   {"models", spec.models},
                   {"fractions", spec.fractions},
                   {"seeds", spec.seeds},
                   {"depths", spec.depths},
                   {"num_users", bundle.users.size()}};
  if (spec.synthetic) {
    report.config["synthetic"] = synthetic_to_json(*spec.synthetic);
  }
  const auto views = build_views(bundle, spec.base.views);
  report.cells = plan_cells(spec);
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    SweepCell& cell = report.cells[i];
    ExperimentConfig config = spec.base;
    apply_model_label(cell.model, config);
    config.labeled_fraction = cell.fraction;
    config.layers = cell.depth;
    config.seed = cell.seed;
    try {
      const auto r = run_experiment(bundle, views, config);
      cell.ok = true;
      cell.num_labeled = r.num_labeled;
      cell.num_classes = r.model.tree().num_classes();
      cell.dev = r.dev;
      cell.test = r.test;
      cell.seconds = spec.record_timing ? r.seconds : 0.0;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
    if (progress) {
      progress(cell, i, report.cells.size());
    }
  }
  report.aggregates = aggregate(report.cells);
  return report;
}

std::vector<SweepAggregate> aggregate(const std::vector<SweepCell>& cells) {
  std::vector<SweepAggregate> out;
  std::map<std::tuple<std::string, double, int>, std::size_t> slot;
  std::vector<std::vector<const SweepCell*>> members;
  for (const auto& c : cells) {
    const auto key = std::make_tuple(c.model, c.fraction, c.depth);
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      SweepAggregate a;
      a.model = c.model;
      a.fraction = c.fraction;
      a.depth = c.depth;
      out.push_back(a);
      members.emplace_back();
    }
    members[it->second].push_back(&c);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> da, dm, dd, ta, tm, td;
    for (const SweepCell* c : members[i]) {
      if (!c->ok) {
        ++out[i].failures;
        continue;
      }
      da.push_back(c->dev.acc161);
      dm.push_back(c->dev.mean_km);
      dd.push_back(c->dev.median_km);
      ta.push_back(c->test.acc161);
      tm.push_back(c->test.mean_km);
      td.push_back(c->test.median_km);
    }
    out[i].runs = da.size();
    out[i].dev_acc161 = summarize(da);
    out[i].dev_mean_km = summarize(dm);
    out[i].dev_median_km = summarize(dd);
    out[i].test_acc161 = summarize(ta);
    out[i].test_mean_km = summarize(tm);
    out[i].test_median_km = summarize(td);
  }
  return out;
}

json report_json(const SweepReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    json j = {{"model", c.model},
              {"fraction", c.fraction},
              {"depth", c.depth},
              {"seed", c.seed},
              {"ok", c.ok},
              {"seconds", c.seconds}};
    if (c.ok) {
      j["num_labeled"] = c.num_labeled;
      j["num_classes"] = c.num_classes;
      j["dev"] = eval_json(c.dev);
      j["test"] = eval_json(c.test);
    } else {
      j["error"] = c.error;
    }
    cells.push_back(std::move(j));
  }
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"model", a.model},
                          {"fraction", a.fraction},
                          {"depth", a.depth},
                          {"runs", a.runs},
                          {"failures", a.failures},
                          {"dev",
                           {{"acc161", summary_json(a.dev_acc161)},
                            {"mean_km", summary_json(a.dev_mean_km)},
                            {"median_km", summary_json(a.dev_median_km)}}},
                          {"test",
                           {{"acc161", summary_json(a.test_acc161)},
                            {"mean_km", summary_json(a.test_mean_km)},
                            {"median_km", summary_json(a.test_median_km)}}}});
  }
  return {{"config", report.config.is_null() ? json::object() : report.config},
          {"record_timing", report.record_timing},
          {"cells", cells},
          {"aggregates", aggregates}};
}

std::string report_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "model,fraction,depth,seed,acc161,mean_km,median_km,seconds\n";
  for (const auto& c : report.cells) {
    out << c.model << ',' << format_number(c.fraction) << ',' << c.depth << ',' << c.seed << ',';
    if (c.ok) {
      out << format_number(c.dev.acc161) << ',' << format_number(c.dev.mean_km) << ','
          << format_number(c.dev.median_km);
    } else {
      out << "nan,nan,nan";
    }
    out << ',' << format_number(c.seconds) << '\n';
  }
  return out.str();
}

void emit_report(const SweepReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto base = std::filesystem::path(dir);
  std::ofstream summary(base / "summary.json", std::ios::binary);
  std::ofstream csv(base / "cells.csv", std::ios::binary);
  if (!summary || !csv) {
    throw IoError("cannot write report files into '" + dir + "'");
  }
  summary << report_json(report).dump(2) << '\n';
  csv << report_csv(report);
  if (!summary || !csv) {
    throw IoError("failed while writing report files into '" + dir + "'");
  }
}

}  // namespace geograph::harness
