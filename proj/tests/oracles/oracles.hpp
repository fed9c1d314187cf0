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
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// Row-major dense matrix on plain vectors.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);

/// D^{-1/2} (A + lambda I) D^{-1/2} with D the row sums of A + lambda I.
/// Rows with zero degree stay zero.
Mat normalize_adjacency(const Mat& a, double lambda);

/// Symmetric eigen-decomposition by cyclic Jacobi rotations. Returns the
/// eigenvalues and the eigenvectors as columns.
std::pair<std::vector<double>, Mat> jacobi_eigen(const Mat& symmetric);

/// Canonical correlations of X and Y with covariances regularised by reg * I,
/// sorted in decreasing order.
std::vector<double> canonical_correlations(const Mat& x, const Mat& y, double reg);

/// Sum of the top-k canonical correlations.
double linear_cca_optimum(const Mat& x, const Mat& y, std::size_t k, double reg);

/// Central finite difference of f with respect to the scalar at `x`.
double central_difference(double& x, const std::function<double()>& f, double step);

/// Nodes within `hops` hops of `source` in an undirected graph.
std::set<std::size_t> within_hops(const std::vector<std::vector<std::size_t>>& adjacency,
                                  std::size_t source, std::size_t hops);

/// Newman modularity of an undirected simple graph given as an edge list.
double modularity(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                  const std::vector<int>& community);

/// Great-circle distance via the spherical law of cosines in atan2 form.
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

/// Reference k-d partition: lists of point indices per leaf, left to right.
struct KdPoint {
  double lat;
  double lon;
};
std::vector<std::vector<std::size_t>> kd_partition(const std::vector<KdPoint>& points,
                                                   std::size_t bucket);

/// Median that averages the two middle values for even counts.
double median(std::vector<double> values);

}  // namespace oracle
