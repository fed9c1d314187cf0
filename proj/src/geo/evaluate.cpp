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

#include "geograph/geo/evaluate.hpp"

#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "geograph/errors.hpp"

namespace geograph::geo {

std::vector<double> prediction_errors_km(std::span<const int> predicted,
                                         std::span<const GeoPoint> truth, const RegionTree& tree) {
  if (predicted.size() != truth.size()) {
    throw DimensionError("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                         std::to_string(truth.size()) + " users");
  }
  std::vector<double> errors(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int cls = predicted[i];
    if (cls < 0 || static_cast<std::size_t>(cls) >= tree.num_classes()) {
      throw ArgumentError("evaluate: predicted class " + std::to_string(cls) + " out of range");
    }
    errors[i] = haversine_km(tree.representative(cls), truth[i]);
  }
  return errors;
}

EvalReport evaluate(std::span<const int> predicted, std::span<const GeoPoint> truth,
                    const RegionTree& tree, double threshold_km) {
  const std::vector<double> errors = prediction_errors_km(predicted, truth, tree);
  EvalReport report;
  report.count = errors.size();
  if (errors.empty()) {
    return report;
  }
  std::size_t hits = 0;
  std::map<int, std::vector<double>> by_class;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] <= threshold_km) {
      ++hits;
    }
    by_class[tree.assign_class(truth[i])].push_back(errors[i]);
  }
  const double n = static_cast<double>(errors.size());
  report.acc161 = static_cast<double>(hits) / n;
  report.mean_km = std::accumulate(errors.begin(), errors.end(), 0.0) / n;
  report.median_km = median(errors);
  for (auto& [cls, errs] : by_class) {
    ClassBreakdown row;
    row.class_id = cls;
    row.count = errs.size();
    row.representative = tree.representative(cls);
    row.median_km = median(std::move(errs));
    report.per_class.push_back(row);
  }
  return report;
}

void write_per_class_csv(const EvalReport& report, std::ostream& out) {
  out << "class_id,count,lat,lon,median_km\n";
  char buf[160];
  for (const auto& row : report.per_class) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%.6f,%.6f,%.3f\n", row.class_id, row.count,
                  row.representative.lat, row.representative.lon, row.median_km);
    out << buf;
  }
}

}  // namespace geograph::geo
