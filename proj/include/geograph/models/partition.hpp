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

#include <vector>

#include "geograph/tensor/dense.hpp"

namespace geograph::models {

using tensor::DenseMatrix;
using tensor::Index;

/// Split of the user population into labelled (U_S) and held-out (U_H) users.
struct Partition {
  std::vector<Index> labeled;
  /// Class of each labelled user, parallel to `labeled`.
  std::vector<int> labels;
  std::vector<Index> heldout;
  int num_classes = 0;

  /// Throws unless U_S and U_H are disjoint, cover 0..num_users-1 and every
  /// label is in [0, num_classes).
  void validate(Index num_users) const;

  /// |U_S| x c one-hot rows.
  DenseMatrix one_hot() const;
};

/// Partition with `labeled` as U_S and every other user in U_H.
Partition make_partition(Index num_users, std::vector<Index> labeled, std::vector<int> labels,
                         int num_classes);

}  // namespace geograph::models
