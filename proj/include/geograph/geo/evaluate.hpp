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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "geograph/geo/geo.hpp"
#include "geograph/geo/region_tree.hpp"

namespace geograph::geo {

struct ClassBreakdown {
  int class_id = 0;
  std::size_t count = 0;
  GeoPoint representative;
  double median_km = 0.0;
};

/// Acc@161, mean and median error in km, plus a breakdown by true region.
struct EvalReport {
  std::size_t count = 0;
  double acc161 = 0.0;
  double mean_km = 0.0;
  double median_km = 0.0;
  std::vector<ClassBreakdown> per_class;
};

/// Error per user is the distance from the predicted class representative to
/// the true point. Users are grouped in `per_class` by the class their true
/// point falls into; classes with no users are omitted.
EvalReport evaluate(std::span<const int> predicted, std::span<const GeoPoint> truth,
                    const RegionTree& tree, double threshold_km = kAcc161ThresholdKm);

/// Per-user errors in km, same order as the inputs.
std::vector<double> prediction_errors_km(std::span<const int> predicted,
                                         std::span<const GeoPoint> truth, const RegionTree& tree);

/// CSV with header `class_id,count,lat,lon,median_km`.
void write_per_class_csv(const EvalReport& report, std::ostream& out);

}  // namespace geograph::geo
