// Copyright 2026 The evcoref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVCOREF_NN_TAPE_H_
#define EVCOREF_NN_TAPE_H_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evcoref/nn/parameter.h"

namespace evcoref::nn {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape
// lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  const Matrix& value() const;
  int rows() const { return static_cast<int>(value().rows()); }
  int cols() const { return static_cast<int>(value().cols()); }
  // Value of a 1x1 node.
  double scalar() const;

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode gradient tape. Operations append nodes in evaluation order;
// Backward() walks them in reverse and accumulates into parameter
// gradients. A tape records one evaluation and is then discarded.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Matrix& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Matrix value);
  // Leaf bound to `param`; Backward() adds into param.grad().
  Var Input(Parameter& param);

  // Appends a node. `backward` receives dL/d(this node) and must push
  // contributions into its inputs via AccumulateGrad. `requires_grad`
  // false skips the closure entirely.
  Var Record(Matrix value, bool requires_grad, BackwardFn backward);

  // Seeds d(root)/d(root) = 1 and propagates. Root must be 1x1. Calling
  // Backward more than once on the same tape is not supported; parameter
  // gradients accumulate across tapes.
  void Backward(Var root);

  const Matrix& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  bool requires_grad(Var v) const { return requires_grad(v.id()); }
  // Adds `g` into the gradient of node `id` (no-op for constants).
  void AccumulateGrad(int id, const Matrix& g);
  void AccumulateGrad(int id, int row, int col, double g);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    bool has_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };

  Matrix& GradSlot(int id);

  std::vector<Node> nodes_;
};

// ---- Linear algebra -------------------------------------------------------

Var MatMul(Var a, Var b);
// a * b^T
Var MatMulTransB(Var a, Var b);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
// Elementwise product.
Var Mul(Var a, Var b);
// Adds row vector `bias` (1 x c) to every row of `a` (n x c).
Var AddRowBroadcast(Var a, Var bias);
// Scales row r of `a` by v(r, 0).
Var MulColumnBroadcast(Var a, Var v);
Var Scale(Var a, double s);
// Multiplies every entry of `a` by the 1x1 node `s`.
Var ScaleBy(Var a, Var s);
// Elementwise product with a fixed matrix (dropout masks).
Var MulConstant(Var a, const Matrix& mask);

// ---- Nonlinearities -------------------------------------------------------

Var Relu(Var a);
Var Sigmoid(Var a);
// Row-wise softmax. Entries where `mask` is false are exactly 0 and take no
// part in the normalization. Every row must keep at least one entry.
Var RowSoftmax(Var a);
Var MaskedRowSoftmax(Var a, const BoolMatrix& mask);
// n x 1 column of log sum_{c : mask(r,c)} exp(a(r,c)).
Var MaskedRowLogSumExp(Var a, const BoolMatrix& mask);

// ---- Shape manipulation ---------------------------------------------------

Var ConcatCols(std::span<const Var> parts);
Var SliceCols(Var a, int begin, int count);
Var GatherRows(Var a, std::span<const int> rows);
// Builds a rows x cols matrix whose (row[p], col[p]) entry is values(p, 0);
// all other entries are 0. Positions must be distinct.
Var ScatterColumn(Var values, std::span<const int> row, std::span<const int> col,
                  int rows, int cols);

// ---- Reductions -----------------------------------------------------------

Var Sum(Var a);
// sum_j weights(0, j) * layers[j]. Gradients flow to `weights` only; the
// layers are treated as constants.
Var WeightedLayerSum(std::span<const Var> layers, Var weights);
// sum_r y_r log sigma(s_r) + (1 - y_r) log(1 - sigma(s_r)), with sigma
// clamped to [1e-7, 1 - 1e-7]. Gradient is zero on clamped entries.
Var BinaryLogLikelihood(Var scores, std::span<const double> labels);

}  // namespace evcoref::nn

#endif  // EVCOREF_NN_TAPE_H_
