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

#include "geograph/geo/region_tree.hpp"

#include <algorithm>
#include <string>

#include "geograph/errors.hpp"

namespace geograph::geo {

namespace {

double coord(const GeoPoint& p, SplitAxis axis) {
  return axis == SplitAxis::kLat ? p.lat : p.lon;
}

double spread(std::span<const GeoPoint> points, const std::vector<std::size_t>& idx,
              SplitAxis axis) {
  const auto [lo, hi] = std::minmax_element(idx.begin(), idx.end(), [&](auto a, auto b) {
    return coord(points[a], axis) < coord(points[b], axis);
  });
  return coord(points[*hi], axis) - coord(points[*lo], axis);
}

// Lower-median split value, or the largest value below the maximum when the
// lower median equals the maximum (heavy ties). Returns false if every point
// shares the same coordinate on this axis.
bool choose_split(std::span<const GeoPoint> points, std::vector<std::size_t>& idx, SplitAxis axis,
                  double& split) {
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    return coord(points[a], axis) < coord(points[b], axis);
  });
  const double hi = coord(points[idx.back()], axis);
  split = coord(points[idx[(idx.size() - 1) / 2]], axis);
  if (split < hi) {
    return true;
  }
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    const double c = coord(points[*it], axis);
    if (c < hi) {
      split = c;
      return true;
    }
  }
  return false;
}

}  // namespace

RegionTree RegionTree::build(std::span<const GeoPoint> points, std::size_t bucket_size) {
  if (points.empty()) {
    throw ArgumentError("RegionTree: no training points");
  }
  if (bucket_size == 0) {
    throw ArgumentError("RegionTree: bucket size must be at least 1");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].valid()) {
      throw ArgumentError("RegionTree: training point " + std::to_string(i) +
                          " has invalid coordinates");
    }
  }
  RegionTree tree;
  tree.bucket_size_ = bucket_size;
  tree.construction_leaf_.assign(points.size(), -1);
  std::vector<std::size_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = i;
  }
  tree.build_node(points, std::move(idx));
  return tree;
}

int RegionTree::build_node(std::span<const GeoPoint> points, std::vector<std::size_t> idx) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  if (idx.size() > bucket_size_) {
    const SplitAxis primary =
        spread(points, idx, SplitAxis::kLon) > spread(points, idx, SplitAxis::kLat)
            ? SplitAxis::kLon
            : SplitAxis::kLat;
    const SplitAxis secondary = primary == SplitAxis::kLat ? SplitAxis::kLon : SplitAxis::kLat;
    double split = 0.0;
    SplitAxis axis = primary;
    bool ok = choose_split(points, idx, axis, split);
    if (!ok) {
      axis = secondary;
      ok = choose_split(points, idx, axis, split);
    }
    if (ok) {
      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (const auto i : idx) {
        (coord(points[i], axis) <= split ? left : right).push_back(i);
      }
      std::sort(left.begin(), left.end());
      std::sort(right.begin(), right.end());
      idx.clear();
      nodes_[id].axis = axis;
      nodes_[id].split = split;
      const int l = build_node(points, std::move(left));
      nodes_[id].left = l;
      const int r = build_node(points, std::move(right));
      nodes_[id].right = r;
      return id;
    }
    // Identical coordinates cannot be separated by a value split: keep them
    // together in one oversized leaf.
  }

  const int cls = static_cast<int>(representatives_.size());
  nodes_[id].leaf_class = cls;
  std::vector<double> lats;
  std::vector<double> lons;
  std::sort(idx.begin(), idx.end());
  for (const auto i : idx) {
    lats.push_back(points[i].lat);
    lons.push_back(points[i].lon);
    construction_leaf_[i] = cls;
  }
  representatives_.push_back({median(std::move(lats)), median(std::move(lons))});
  members_.push_back(std::move(idx));
  return id;
}

RegionTree RegionTree::from_parts(std::vector<Node> nodes, std::vector<GeoPoint> representatives,
                                  std::size_t bucket_size) {
  if (nodes.empty() || representatives.empty()) {
    throw ArgumentError("RegionTree: empty serialized tree");
  }
  std::size_t leaves = 0;
  for (const auto& n : nodes) {
    if (n.leaf_class >= 0) {
      if (static_cast<std::size_t>(n.leaf_class) >= representatives.size()) {
        throw ArgumentError("RegionTree: leaf class out of range");
      }
      ++leaves;
    } else if (n.left < 0 || n.right < 0 || static_cast<std::size_t>(n.left) >= nodes.size() ||
               static_cast<std::size_t>(n.right) >= nodes.size()) {
      throw ArgumentError("RegionTree: dangling child index");
    }
  }
  if (leaves != representatives.size()) {
    throw ArgumentError("RegionTree: leaf count does not match representatives");
  }
  RegionTree tree;
  tree.nodes_ = std::move(nodes);
  tree.representatives_ = std::move(representatives);
  tree.members_.resize(tree.representatives_.size());
  tree.bucket_size_ = bucket_size;
  return tree;
}

int RegionTree::assign_class(const GeoPoint& p) const {
  int id = 0;
  while (nodes_[id].leaf_class < 0) {
    const Node& n = nodes_[id];
    id = coord(p, n.axis) <= n.split ? n.left : n.right;
  }
  return nodes_[id].leaf_class;
}

}  // namespace geograph::geo
