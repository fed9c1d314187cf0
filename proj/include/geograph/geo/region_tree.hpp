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
#include <span>
#include <vector>

#include "geograph/geo/geo.hpp"

namespace geograph::geo {

enum class SplitAxis { kLat, kLon };

/// k-d tree over training coordinates whose leaves are the class labels.
///
/// Built by recursive median splits on the axis with the wider raw-degree
/// spread. A point goes left when its coordinate is <= the split value. Leaves
/// are numbered 0..c-1 in left-to-right order and carry the componentwise
/// median of their members as representative point. Immutable once built.
class RegionTree {
 public:
  struct Node {
    SplitAxis axis = SplitAxis::kLat;
    double split = 0.0;
    int left = -1;
    int right = -1;
    /// Class id for leaves, -1 for internal nodes.
    int leaf_class = -1;
  };

  /// Throws ArgumentError for an empty point set or bucket_size 0.
  static RegionTree build(std::span<const GeoPoint> points, std::size_t bucket_size);

  /// Rebuilds a tree from its serialized nodes (members are not restored).
  static RegionTree from_parts(std::vector<Node> nodes, std::vector<GeoPoint> representatives,
                               std::size_t bucket_size);

  int assign_class(const GeoPoint& p) const;

  std::size_t num_classes() const noexcept { return representatives_.size(); }
  std::size_t bucket_size() const noexcept { return bucket_size_; }
  const GeoPoint& representative(int cls) const { return representatives_.at(cls); }
  const std::vector<GeoPoint>& representatives() const noexcept { return representatives_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  /// Indices (into the build input) of the members of each leaf.
  std::span<const std::size_t> members(int cls) const { return members_.at(cls); }

  /// Leaf that received training point `i` during construction.
  int construction_leaf(std::size_t i) const { return construction_leaf_.at(i); }

 private:
  int build_node(std::span<const GeoPoint> points, std::vector<std::size_t> idx);

  std::vector<Node> nodes_;
  std::vector<GeoPoint> representatives_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<int> construction_leaf_;
  std::size_t bucket_size_ = 1;
};

}  // namespace geograph::geo
