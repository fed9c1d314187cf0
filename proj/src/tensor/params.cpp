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

#include "geograph/tensor/params.hpp"

#include <cmath>

#include "geograph/errors.hpp"

namespace geograph::tensor {

std::size_t ParamSet::add(std::string name, DenseMatrix init) {
  if (contains(name)) {
    throw ArgumentError("ParamSet: duplicate parameter '" + name + "'");
  }
  if (!init.allFinite()) {
    throw NumericError("ParamSet: non-finite initial value for '" + name + "'");
  }
  Entry e;
  e.grad = DenseMatrix::Zero(init.rows(), init.cols());
  e.first_moment = DenseMatrix::Zero(init.rows(), init.cols());
  e.second_moment = DenseMatrix::Zero(init.rows(), init.cols());
  e.value = std::move(init);
  e.name = std::move(name);
  entries_.push_back(std::move(e));
  return entries_.size() - 1;
}

bool ParamSet::contains(std::string_view name) const noexcept {
  for (const auto& e : entries_) {
    if (e.name == name) {
      return true;
    }
  }
  return false;
}

std::size_t ParamSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) {
      return i;
    }
  }
  throw ArgumentError("ParamSet: no parameter named '" + std::string(name) + "'");
}

void ParamSet::zero_grad() {
  for (auto& e : entries_) {
    e.grad.setZero();
  }
}

std::vector<DenseMatrix> ParamSet::snapshot() const {
  std::vector<DenseMatrix> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    out.push_back(e.value);
  }
  return out;
}

void ParamSet::restore(const std::vector<DenseMatrix>& values) {
  if (values.size() != entries_.size()) {
    throw DimensionError("ParamSet::restore: expected " + std::to_string(entries_.size()) +
                         " tensors, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_same_shape(entries_[i].value, values[i], "ParamSet::restore");
    entries_[i].value = values[i];
  }
}

std::size_t ParamSet::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries_) {
    n += static_cast<std::size_t>(e.value.size());
  }
  return n;
}

void adam_step(ParamSet& params, double lr) {
  ++params.step_;
  const double t = static_cast<double>(params.step_);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, t);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, t);
  for (auto& e : params.entries_) {
    e.first_moment = kAdamBeta1 * e.first_moment + (1.0 - kAdamBeta1) * e.grad;
    e.second_moment =
        kAdamBeta2 * e.second_moment + (1.0 - kAdamBeta2) * e.grad.cwiseProduct(e.grad);
    e.value.array() -= lr * (e.first_moment.array() / correction1) /
                       ((e.second_moment.array() / correction2).sqrt() + kAdamEpsilon);
  }
}

DenseMatrix glorot_uniform(Index fan_in, Index fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  DenseMatrix w(fan_in, fan_out);
  for (Index i = 0; i < w.size(); ++i) {
    w.data()[i] = dist(rng);
  }
  return w;
}

}  // namespace geograph::tensor
