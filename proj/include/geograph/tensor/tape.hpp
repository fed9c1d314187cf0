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
#include <deque>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "geograph/tensor/dense.hpp"
#include "geograph/tensor/params.hpp"
#include "geograph/tensor/sparse.hpp"

namespace geograph::tensor {

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
 public:
  std::size_t id() const noexcept { return id_; }

 private:
  friend class Tape;
  explicit Var(std::size_t id) : id_(id) {}
  std::size_t id_;
};

/// Recorded-tape reverse-mode differentiation over a fixed op vocabulary.
///
/// A tape is bound to one ParamSet. Ops execute eagerly and record how to
/// propagate gradients back to their inputs. `backward` may run once per tape;
/// it zeroes every gradient slot in the ParamSet first, so parameters not
/// reachable from the loss end with zero gradient.
///
/// Sparse operands are borrowed, not copied: they must outlive the tape, or be
/// handed to `hold` first.
class Tape {
 public:
  explicit Tape(ParamSet& params);

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var param(std::size_t index);
  Var param(std::string_view name);
  Var constant(DenseMatrix value);

  /// Takes ownership of a sparse matrix so ops may reference it.
  const SparseMatrix& hold(SparseMatrix s);

  const DenseMatrix& value(Var v) const;
  /// Gradient of the loss w.r.t. `v`; zero-shaped matrix when unreachable.
  const DenseMatrix& grad(Var v) const;

  std::size_t size() const noexcept { return nodes_.size(); }

  Var matmul(Var a, Var b);
  /// s * x for a constant sparse s.
  Var spmm(const SparseMatrix& s, Var x);
  Var add(Var a, Var b);
  /// Adds a 1 x d bias row to every row of x.
  Var add_bias(Var x, Var bias);
  Var relu(Var x);
  Var sigmoid(Var x);
  Var mul(Var a, Var b);
  /// Elementwise product with a constant (dropout masks).
  Var mask(Var x, DenseMatrix m);
  /// transformed * gate + carry * (1 - gate).
  Var gate_combine(Var carry, Var transformed, Var gate);
  Var concat_cols(Var a, Var b);
  Var sum(Var x);
  Var square(Var x);
  /// Mean softmax cross-entropy over the listed rows of `logits`.
  Var softmax_cross_entropy(Var logits, std::span<const Index> rows, std::span<const int> labels);
  /// Negative total canonical correlation between two views.
  Var cca_loss(Var h1, Var h2, double reg);

  void backward(Var loss);

 private:
  using Backprop = std::function<void(Tape&, const DenseMatrix& upstream)>;

  struct Node {
    DenseMatrix value;
    DenseMatrix grad;
    bool needs_grad = false;
    std::ptrdiff_t param = -1;
    Backprop backprop;
  };

  Var push(DenseMatrix value, bool needs_grad, Backprop backprop);
  const Node& node(Var v) const;
  bool needs(Var v) const { return nodes_[v.id()].needs_grad; }
  void accumulate(Var v, const DenseMatrix& g);

  ParamSet* params_;
  std::vector<Node> nodes_;
  std::deque<SparseMatrix> held_;
  bool backward_done_ = false;
};

}  // namespace geograph::tensor
