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

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "geograph/tensor/dense.hpp"

namespace geograph::tensor {

/// Named trainable parameters with gradient slots and Adam moment estimates.
///
/// Every parameter owns a gradient and two moment buffers of its own shape.
/// Insertion order is preserved and defines checkpoint layout.
class ParamSet {
 public:
  /// Throws ArgumentError on a duplicate name.
  std::size_t add(std::string name, DenseMatrix init);

  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(std::string_view name) const noexcept;
  std::size_t index_of(std::string_view name) const;

  const std::string& name(std::size_t i) const { return entries_.at(i).name; }
  DenseMatrix& value(std::size_t i) { return entries_.at(i).value; }
  const DenseMatrix& value(std::size_t i) const { return entries_.at(i).value; }
  DenseMatrix& value(std::string_view name) { return value(index_of(name)); }
  const DenseMatrix& value(std::string_view name) const { return value(index_of(name)); }

  DenseMatrix& grad(std::size_t i) { return entries_.at(i).grad; }
  const DenseMatrix& grad(std::size_t i) const { return entries_.at(i).grad; }
  const DenseMatrix& grad(std::string_view name) const { return grad(index_of(name)); }

  void zero_grad();

  std::int64_t step() const noexcept { return step_; }

  /// Parameter values only, in insertion order.
  std::vector<DenseMatrix> snapshot() const;
  void restore(const std::vector<DenseMatrix>& values);

  std::size_t scalar_count() const noexcept;

 private:
  friend void adam_step(ParamSet& params, double lr);

  struct Entry {
    std::string name;
    DenseMatrix value;
    DenseMatrix grad;
    DenseMatrix first_moment;
    DenseMatrix second_moment;
  };

  std::vector<Entry> entries_;
  std::int64_t step_ = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

/// One bias-corrected Adam update from the current gradients.
void adam_step(ParamSet& params, double lr);

using Rng = std::mt19937_64;

/// Uniform Glorot initialisation: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
DenseMatrix glorot_uniform(Index fan_in, Index fan_out, Rng& rng);

}  // namespace geograph::tensor
