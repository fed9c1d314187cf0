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

#include "geograph/models/partition.hpp"

#include <string>

#include "geograph/errors.hpp"

namespace geograph::models {

void Partition::validate(Index num_users) const {
  if (labeled.size() != labels.size()) {
    throw DimensionError("Partition: " + std::to_string(labeled.size()) + " labelled users but " +
                         std::to_string(labels.size()) + " labels");
  }
  if (num_classes < 1) {
    throw ArgumentError("Partition: no classes");
  }
  std::vector<int> seen(static_cast<std::size_t>(num_users), 0);
  auto mark = [&](Index u) {
    if (u < 0 || u >= num_users) {
      throw ArgumentError("Partition: user " + std::to_string(u) + " out of range");
    }
    if (seen[static_cast<std::size_t>(u)]++ != 0) {
      throw ArgumentError("Partition: user " + std::to_string(u) + " listed twice");
    }
  };
  for (const Index u : labeled) {
    mark(u);
  }
  for (const Index u : heldout) {
    mark(u);
  }
  for (const int s : seen) {
    if (s == 0) {
      throw ArgumentError("Partition: U_S and U_H do not cover every user");
    }
  }
  for (const int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw ArgumentError("Partition: label " + std::to_string(y) + " out of range");
    }
  }
}

DenseMatrix Partition::one_hot() const {
  DenseMatrix y = DenseMatrix::Zero(static_cast<Index>(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y(static_cast<Index>(i), labels[i]) = 1.0;
  }
  return y;
}

Partition make_partition(Index num_users, std::vector<Index> labeled, std::vector<int> labels,
                         int num_classes) {
  Partition p;
  std::vector<char> is_labeled(static_cast<std::size_t>(num_users), 0);
  for (const Index u : labeled) {
    if (u >= 0 && u < num_users) {
      is_labeled[static_cast<std::size_t>(u)] = 1;
    }
  }
  for (Index u = 0; u < num_users; ++u) {
    if (is_labeled[static_cast<std::size_t>(u)] == 0) {
      p.heldout.push_back(u);
    }
  }
  p.labeled = std::move(labeled);
  p.labels = std::move(labels);
  p.num_classes = num_classes;
  p.validate(num_users);
  return p;
}

}  // namespace geograph::models
