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

#include "geograph/tensor/tape.hpp"

#include <cmath>
#include <string>

#include "geograph/errors.hpp"
#include "geograph/tensor/cca.hpp"

namespace geograph::tensor {

Tape::Tape(ParamSet& params) : params_(&params) {}

Var Tape::push(DenseMatrix value, bool needs_grad, Backprop backprop) {
  if (!value.allFinite()) {
    throw NumericError("tape: op produced a non-finite value at node " +
                       std::to_string(nodes_.size()));
  }
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) {
    n.backprop = std::move(backprop);
  }
  nodes_.push_back(std::move(n));
  return Var(nodes_.size() - 1);
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id() >= nodes_.size()) {
    throw StateError("tape: variable does not belong to this tape");
  }
  return nodes_[v.id()];
}

void Tape::accumulate(Var v, const DenseMatrix& g) {
  Node& n = nodes_[v.id()];
  if (!n.needs_grad) {
    return;
  }
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

Var Tape::param(std::size_t index) {
  Var v = push(params_->value(index), true, nullptr);
  nodes_.back().param = static_cast<std::ptrdiff_t>(index);
  return v;
}

Var Tape::param(std::string_view name) { return param(params_->index_of(name)); }

Var Tape::constant(DenseMatrix value) { return push(std::move(value), false, nullptr); }

const SparseMatrix& Tape::hold(SparseMatrix s) {
  held_.push_back(std::move(s));
  return held_.back();
}

const DenseMatrix& Tape::value(Var v) const { return node(v).value; }

const DenseMatrix& Tape::grad(Var v) const {
  if (!backward_done_) {
    throw StateError("tape: gradients requested before backward");
  }
  return node(v).grad;
}

Var Tape::matmul(Var a, Var b) {
  const DenseMatrix& av = value(a);
  const DenseMatrix& bv = value(b);
  if (av.cols() != bv.rows()) {
    throw DimensionError("matmul: " + std::to_string(av.rows()) + "x" + std::to_string(av.cols()) +
                         " times " + std::to_string(bv.rows()) + "x" + std::to_string(bv.cols()));
  }
  return push(av * bv, needs(a) || needs(b), [a, b](Tape& t, const DenseMatrix& g) {
    if (t.needs(a)) {
      t.accumulate(a, g * t.value(b).transpose());
    }
    if (t.needs(b)) {
      t.accumulate(b, t.value(a).transpose() * g);
    }
  });
}

Var Tape::spmm(const SparseMatrix& s, Var x) {
  const SparseMatrix* sp = &s;
  return push(tensor::spmm(s, value(x)), needs(x), [sp, x](Tape& t, const DenseMatrix& g) {
    t.accumulate(x, spmm_transposed(*sp, g));
  });
}

Var Tape::add(Var a, Var b) {
  require_same_shape(value(a), value(b), "add");
  return push(value(a) + value(b), needs(a) || needs(b), [a, b](Tape& t, const DenseMatrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var Tape::add_bias(Var x, Var bias) {
  const DenseMatrix& xv = value(x);
  const DenseMatrix& bv = value(bias);
  if (bv.rows() != 1 || bv.cols() != xv.cols()) {
    throw DimensionError("add_bias: bias is " + std::to_string(bv.rows()) + "x" +
                         std::to_string(bv.cols()) + ", input has " + std::to_string(xv.cols()) +
                         " columns");
  }
  DenseMatrix out = xv;
  out.rowwise() += bv.row(0);
  return push(std::move(out), needs(x) || needs(bias), [x, bias](Tape& t, const DenseMatrix& g) {
    t.accumulate(x, g);
    if (t.needs(bias)) {
      t.accumulate(bias, g.colwise().sum());
    }
  });
}

Var Tape::relu(Var x) {
  return push(tensor::relu(value(x)), needs(x), [x](Tape& t, const DenseMatrix& g) {
    const DenseMatrix& xv = t.value(x);
    t.accumulate(x, (xv.array() > 0.0).select(g, 0.0));
  });
}

Var Tape::sigmoid(Var x) {
  DenseMatrix s = tensor::sigmoid(value(x));
  const std::size_t self = nodes_.size();
  return push(std::move(s), needs(x), [x, self](Tape& t, const DenseMatrix& g) {
    const DenseMatrix& sv = t.nodes_[self].value;
    t.accumulate(x, (g.array() * sv.array() * (1.0 - sv.array())).matrix());
  });
}

Var Tape::mul(Var a, Var b) {
  return push(elementwise_mul(value(a), value(b)), needs(a) || needs(b),
              [a, b](Tape& t, const DenseMatrix& g) {
                if (t.needs(a)) {
                  t.accumulate(a, g.cwiseProduct(t.value(b)));
                }
                if (t.needs(b)) {
                  t.accumulate(b, g.cwiseProduct(t.value(a)));
                }
              });
}

Var Tape::mask(Var x, DenseMatrix m) {
  DenseMatrix out = elementwise_mul(value(x), m);
  return push(std::move(out), needs(x), [x, m = std::move(m)](Tape& t, const DenseMatrix& g) {
    t.accumulate(x, g.cwiseProduct(m));
  });
}

Var Tape::gate_combine(Var carry, Var transformed, Var gate) {
  const DenseMatrix& c = value(carry);
  const DenseMatrix& h = value(transformed);
  const DenseMatrix& tg = value(gate);
  require_same_shape(c, h, "gate_combine");
  require_same_shape(c, tg, "gate_combine");
  DenseMatrix out = (h.array() * tg.array() + c.array() * (1.0 - tg.array())).matrix();
  return push(std::move(out), needs(carry) || needs(transformed) || needs(gate),
              [carry, transformed, gate](Tape& t, const DenseMatrix& g) {
                const DenseMatrix& tv = t.value(gate);
                if (t.needs(transformed)) {
                  t.accumulate(transformed, g.cwiseProduct(tv));
                }
                if (t.needs(carry)) {
                  t.accumulate(carry, (g.array() * (1.0 - tv.array())).matrix());
                }
                if (t.needs(gate)) {
                  t.accumulate(gate, (g.array() * (t.value(transformed).array() -
                                                   t.value(carry).array()))
                                         .matrix());
                }
              });
}

Var Tape::concat_cols(Var a, Var b) {
  const DenseMatrix& av = value(a);
  const DenseMatrix& bv = value(b);
  if (av.rows() != bv.rows()) {
    throw DimensionError("concat_cols: row counts differ (" + std::to_string(av.rows()) + " vs " +
                         std::to_string(bv.rows()) + ")");
  }
  DenseMatrix out(av.rows(), av.cols() + bv.cols());
  out << av, bv;
  const Index split = av.cols();
  return push(std::move(out), needs(a) || needs(b), [a, b, split](Tape& t, const DenseMatrix& g) {
    if (t.needs(a)) {
      t.accumulate(a, g.leftCols(split));
    }
    if (t.needs(b)) {
      t.accumulate(b, g.rightCols(g.cols() - split));
    }
  });
}

Var Tape::sum(Var x) {
  DenseMatrix out(1, 1);
  out(0, 0) = value(x).sum();
  return push(std::move(out), needs(x), [x](Tape& t, const DenseMatrix& g) {
    const DenseMatrix& xv = t.value(x);
    t.accumulate(x, DenseMatrix::Constant(xv.rows(), xv.cols(), g(0, 0)));
  });
}

Var Tape::square(Var x) {
  return push(value(x).cwiseAbs2(), needs(x), [x](Tape& t, const DenseMatrix& g) {
    t.accumulate(x, 2.0 * g.cwiseProduct(t.value(x)));
  });
}

Var Tape::softmax_cross_entropy(Var logits, std::span<const Index> rows,
                                std::span<const int> labels) {
  const DenseMatrix& z = value(logits);
  if (rows.empty()) {
    throw ArgumentError("softmax_cross_entropy: no labelled rows");
  }
  if (rows.size() != labels.size()) {
    throw DimensionError("softmax_cross_entropy: " + std::to_string(rows.size()) + " rows but " +
                         std::to_string(labels.size()) + " labels");
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  DenseMatrix dz = DenseMatrix::Zero(z.rows(), z.cols());
  double loss = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index r = rows[k];
    const int y = labels[k];
    if (r < 0 || r >= z.rows()) {
      throw DimensionError("softmax_cross_entropy: row " + std::to_string(r) + " out of range");
    }
    if (y < 0 || y >= z.cols()) {
      throw ArgumentError("softmax_cross_entropy: label " + std::to_string(y) + " out of range");
    }
    const double m = z.row(r).maxCoeff();
    const auto shifted = (z.row(r).array() - m).eval();
    const double log_norm = std::log(shifted.exp().sum());
    loss -= (shifted(y) - log_norm) * inv;
    dz.row(r) = ((shifted - log_norm).exp() * inv).matrix();
    dz(r, y) -= inv;
  }
  DenseMatrix out(1, 1);
  out(0, 0) = loss;
  return push(std::move(out), needs(logits),
              [logits, dz = std::move(dz)](Tape& t, const DenseMatrix& g) {
                t.accumulate(logits, g(0, 0) * dz);
              });
}

Var Tape::cca_loss(Var h1, Var h2, double reg) {
  CcaObjective obj = cca_objective(value(h1), value(h2), reg);
  DenseMatrix out(1, 1);
  out(0, 0) = -obj.total_correlation;
  return push(std::move(out), needs(h1) || needs(h2),
              [h1, h2, g1 = std::move(obj.grad_h1), g2 = std::move(obj.grad_h2)](
                  Tape& t, const DenseMatrix& g) {
                t.accumulate(h1, -g(0, 0) * g1);
                t.accumulate(h2, -g(0, 0) * g2);
              });
}

void Tape::backward(Var loss) {
  if (nodes_.empty()) {
    throw StateError("tape: backward called before any forward op");
  }
  if (backward_done_) {
    throw StateError("tape: backward already ran on this tape");
  }
  const Node& root = node(loss);
  if (root.value.rows() != 1 || root.value.cols() != 1) {
    throw StateError("tape: backward requires a scalar loss");
  }
  params_->zero_grad();
  backward_done_ = true;
  if (!root.needs_grad) {
    return;
  }
  nodes_[loss.id()].grad = DenseMatrix::Ones(1, 1);
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.needs_grad || n.grad.size() == 0) {
      continue;
    }
    if (n.param >= 0) {
      params_->grad(static_cast<std::size_t>(n.param)) += n.grad;
    } else if (n.backprop) {
      n.backprop(*this, n.grad);
    }
  }
}

}  // namespace geograph::tensor
