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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geograph/geo/geo.hpp"
#include "geograph/tensor/dense.hpp"
#include "geograph/views/views.hpp"

namespace geograph::harness {

using tensor::Index;

enum class Split { kTrain, kDev, kTest };
enum class Provenance { kGeotext, kTwitterUs, kTwitterWorld, kSynthetic, kCustom };

std::string_view to_string(Split s);
std::string_view to_string(Provenance p);
Split parse_split(std::string_view s);
Provenance parse_provenance(std::string_view s);

struct User {
  std::string id;
  std::string text;
  /// Required for training users; optional elsewhere.
  std::optional<geo::GeoPoint> location;
  Split split = Split::kTrain;
};

struct DatasetBundle {
  std::vector<User> users;
  std::vector<views::MentionPair> mentions;
  Provenance provenance = Provenance::kCustom;

  std::vector<Index> users_in(Split split) const;
  std::vector<std::string> ids() const;
  std::vector<std::string> texts() const;

  /// Throws on duplicate ids or training users without coordinates.
  void validate() const;
};

/// JSON-lines users: {"id", "lat", "lon", "text", "split"} per line.
std::vector<User> parse_users(std::istream& in, const std::string& source);
/// Two tab-separated columns per line: mentioning user id, mentioned handle.
std::vector<views::MentionPair> parse_mentions(std::istream& in, const std::string& source);

DatasetBundle load_dataset(const std::string& users_path, const std::string& edges_path,
                           Provenance provenance = Provenance::kCustom);

void write_users(const DatasetBundle& bundle, std::ostream& out);
void write_mentions(const DatasetBundle& bundle, std::ostream& out);
/// Writes `users.jsonl` and `edges.tsv` into `dir`, creating it if needed.
void save_dataset(const DatasetBundle& bundle, const std::string& dir);

views::ViewMatrices build_views(const DatasetBundle& bundle, const views::ViewOptions& options);

}  // namespace geograph::harness
