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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

namespace oracle {

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) {
    throw std::invalid_argument("oracle::matmul shape mismatch");
  }
  Mat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols; ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

Mat normalize_adjacency(const Mat& a, double lambda) {
  const std::size_t n = a.rows;
  Mat tilde = a;
  for (std::size_t i = 0; i < n; ++i) {
    tilde(i, i) += lambda;
  }
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      degree[i] += tilde(i, j);
    }
  }
  Mat out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (degree[i] > 0.0 && degree[j] > 0.0) {
        out(i, j) = tilde(i, j) / std::sqrt(degree[i] * degree[j]);
      }
    }
  }
  return out;
}

std::pair<std::vector<double>, Mat> jacobi_eigen(const Mat& symmetric) {
  const std::size_t n = symmetric.rows;
  Mat a = symmetric;
  Mat v(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    v(i, i) = 1.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        off += a(p, q) * a(p, q);
      }
    }
    if (off < 1e-30) {
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) {
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = a(i, i);
  }
  return {values, v};
}

namespace {

Mat centred_cross_covariance(const Mat& x, const Mat& y) {
  const std::size_t n = x.rows;
  std::vector<double> mx(x.cols, 0.0);
  std::vector<double> my(y.cols, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) mx[j] += x(i, j) / static_cast<double>(n);
    for (std::size_t j = 0; j < y.cols; ++j) my[j] += y(i, j) / static_cast<double>(n);
  }
  Mat c(x.cols, y.cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < x.cols; ++a) {
      for (std::size_t b = 0; b < y.cols; ++b) {
        c(a, b) += (x(i, a) - mx[a]) * (y(i, b) - my[b]);
      }
    }
  }
  for (auto& v : c.data) {
    v /= static_cast<double>(n - 1);
  }
  return c;
}

Mat inverse_sqrt(const Mat& s) {
  auto [values, vectors] = jacobi_eigen(s);
  const std::size_t n = s.rows;
  Mat out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 1.0 / std::sqrt(values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += vectors(i, k) * w * vectors(j, k);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> canonical_correlations(const Mat& x, const Mat& y, double reg) {
  Mat s11 = centred_cross_covariance(x, x);
  Mat s22 = centred_cross_covariance(y, y);
  const Mat s12 = centred_cross_covariance(x, y);
  for (std::size_t i = 0; i < s11.rows; ++i) s11(i, i) += reg;
  for (std::size_t i = 0; i < s22.rows; ++i) s22(i, i) += reg;
  const Mat t = matmul(matmul(inverse_sqrt(s11), s12), inverse_sqrt(s22));
  auto [values, vectors] = jacobi_eigen(matmul(transpose(t), t));
  std::vector<double> sv;
  for (const double v : values) {
    sv.push_back(std::sqrt(std::max(0.0, v)));
  }
  std::sort(sv.rbegin(), sv.rend());
  sv.resize(std::min(x.cols, y.cols));
  return sv;
}

double linear_cca_optimum(const Mat& x, const Mat& y, std::size_t k, double reg) {
  const auto sv = canonical_correlations(x, y, reg);
  double total = 0.0;
  for (std::size_t i = 0; i < std::min(k, sv.size()); ++i) {
    total += sv[i];
  }
  return total;
}

double central_difference(double& x, const std::function<double()>& f, double step) {
  const double saved = x;
  x = saved + step;
  const double plus = f();
  x = saved - step;
  const double minus = f();
  x = saved;
  return (plus - minus) / (2.0 * step);
}

std::set<std::size_t> within_hops(const std::vector<std::vector<std::size_t>>& adjacency,
                                  std::size_t source, std::size_t hops) {
  std::vector<std::size_t> dist(adjacency.size(), static_cast<std::size_t>(-1));
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  std::set<std::size_t> seen{source};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (dist[u] == hops) {
      continue;
    }
    for (const std::size_t v : adjacency[u]) {
      if (dist[v] == static_cast<std::size_t>(-1)) {
        dist[v] = dist[u] + 1;
        seen.insert(v);
        queue.push_back(v);
      }
    }
  }
  return seen;
}

double modularity(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                  const std::vector<int>& community) {
  const double m = static_cast<double>(edges.size());
  std::vector<double> degree(n, 0.0);
  double internal = 0.0;
  for (const auto& [u, v] : edges) {
    degree[u] += 1.0;
    degree[v] += 1.0;
    if (community[u] == community[v]) {
      internal += 1.0;
    }
  }
  int max_c = 0;
  for (const int c : community) max_c = std::max(max_c, c);
  std::vector<double> total(static_cast<std::size_t>(max_c) + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    total[static_cast<std::size_t>(community[i])] += degree[i];
  }
  double expected = 0.0;
  for (const double t : total) {
    expected += (t / (2.0 * m)) * (t / (2.0 * m));
  }
  return internal / m - expected;
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  const double d2r = std::numbers::pi / 180.0;
  const double p1 = lat1 * d2r;
  const double p2 = lat2 * d2r;
  const double dl = (lon2 - lon1) * d2r;
  const double y = std::hypot(std::cos(p2) * std::sin(dl),
                              std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl));
  const double x = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  return 6371.0 * std::atan2(y, x);
}

namespace {

void kd_recurse(const std::vector<KdPoint>& pts, std::vector<std::size_t> idx, std::size_t bucket,
                std::vector<std::vector<std::size_t>>& leaves) {
  auto value = [&](std::size_t i, int axis) { return axis == 0 ? pts[i].lat : pts[i].lon; };
  auto range = [&](int axis) {
    double lo = value(idx[0], axis);
    double hi = lo;
    for (const auto i : idx) {
      lo = std::min(lo, value(i, axis));
      hi = std::max(hi, value(i, axis));
    }
    return hi - lo;
  };
  if (idx.size() > bucket) {
    const int first = range(1) > range(0) ? 1 : 0;
    for (const int axis : {first, 1 - first}) {
      std::vector<double> vals;
      for (const auto i : idx) vals.push_back(value(i, axis));
      std::sort(vals.begin(), vals.end());
      double split = vals[(vals.size() - 1) / 2];
      if (split == vals.back()) {
        const auto below = std::lower_bound(vals.begin(), vals.end(), vals.back());
        if (below == vals.begin()) {
          continue;
        }
        split = *(below - 1);
      }
      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (const auto i : idx) {
        (value(i, axis) <= split ? left : right).push_back(i);
      }
      kd_recurse(pts, left, bucket, leaves);
      kd_recurse(pts, right, bucket, leaves);
      return;
    }
  }
  std::sort(idx.begin(), idx.end());
  leaves.push_back(idx);
}

}  // namespace

std::vector<std::vector<std::size_t>> kd_partition(const std::vector<KdPoint>& points,
                                                   std::size_t bucket) {
  std::vector<std::vector<std::size_t>> leaves;
  std::vector<std::size_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  kd_recurse(points, idx, bucket, leaves);
  return leaves;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace oracle
