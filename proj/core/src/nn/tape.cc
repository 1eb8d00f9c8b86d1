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

#include "evcoref/nn/tape.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evcoref/error.h"

namespace evcoref::nn {
namespace {

bool AnyRequiresGrad(std::initializer_list<Var> vars) {
  for (const Var& v : vars) {
    if (v.tape()->requires_grad(v)) return true;
  }
  return false;
}

void CheckSameTape(Var a, Var b) {
  if (a.tape() != b.tape()) throw std::invalid_argument("vars on different tapes");
}

void CheckSameShape(Var a, Var b, const char* op) {
  CheckSameTape(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

const Matrix& Var::value() const { return tape_->value(id_); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.size() != 1) throw std::logic_error("scalar() on non-1x1 node");
  return v(0, 0);
}

Var Tape::Constant(Matrix value) {
  return Record(std::move(value), false, nullptr);
}

Var Tape::Input(Parameter& param) {
  Var v = Record(param.value(), true, nullptr);
  nodes_[v.id()].param = &param;
  return v;
}

Var Tape::Record(Matrix value, bool requires_grad, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Matrix& Tape::GradSlot(int id) {
  Node& node = nodes_[id];
  if (!node.has_grad) {
    node.grad = Matrix::Zero(node.value.rows(), node.value.cols());
    node.has_grad = true;
  }
  return node.grad;
}

void Tape::AccumulateGrad(int id, const Matrix& g) {
  if (!nodes_[id].requires_grad) return;
  GradSlot(id) += g;
}

void Tape::AccumulateGrad(int id, int row, int col, double g) {
  if (!nodes_[id].requires_grad) return;
  GradSlot(id)(row, col) += g;
}

void Tape::Backward(Var root) {
  if (root.tape() != this) throw std::invalid_argument("root on another tape");
  if (root.value().size() != 1) {
    throw std::invalid_argument("Backward root must be 1x1");
  }
  if (!std::isfinite(root.scalar())) {
    throw NumericError("non-finite objective value");
  }
  if (!nodes_[root.id()].requires_grad) return;
  GradSlot(root.id())(0, 0) += 1.0;
  for (int id = root.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.requires_grad || !node.has_grad) continue;
    Matrix g = std::move(node.grad);
    node.has_grad = false;
    if (node.param != nullptr) {
      node.param->grad() += g;
    } else if (node.backward) {
      node.backward(*this, g);
    }
  }
}

// ---- Linear algebra -------------------------------------------------------

Var MatMul(Var a, Var b) {
  CheckSameTape(a, b);
  if (a.cols() != b.rows()) throw std::invalid_argument("MatMul: shape mismatch");
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(
      a.value() * b.value(), AnyRequiresGrad({a, b}),
      [ia, ib](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) t.AccumulateGrad(ia, g * t.value(ib).transpose());
        if (t.requires_grad(ib)) t.AccumulateGrad(ib, t.value(ia).transpose() * g);
      });
}

Var MatMulTransB(Var a, Var b) {
  CheckSameTape(a, b);
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("MatMulTransB: shape mismatch");
  }
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(
      a.value() * b.value().transpose(), AnyRequiresGrad({a, b}),
      [ia, ib](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) t.AccumulateGrad(ia, g * t.value(ib));
        if (t.requires_grad(ib)) t.AccumulateGrad(ib, g.transpose() * t.value(ia));
      });
}

Var Add(Var a, Var b) {
  CheckSameShape(a, b, "Add");
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(a.value() + b.value(), AnyRequiresGrad({a, b}),
                          [ia, ib](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(ia, g);
                            t.AccumulateGrad(ib, g);
                          });
}

Var Sub(Var a, Var b) {
  CheckSameShape(a, b, "Sub");
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(a.value() - b.value(), AnyRequiresGrad({a, b}),
                          [ia, ib](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(ia, g);
                            if (t.requires_grad(ib)) t.AccumulateGrad(ib, -g);
                          });
}

Var Mul(Var a, Var b) {
  CheckSameShape(a, b, "Mul");
  const int ia = a.id(), ib = b.id();
  return a.tape()->Record(
      a.value().cwiseProduct(b.value()), AnyRequiresGrad({a, b}),
      [ia, ib](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) t.AccumulateGrad(ia, g.cwiseProduct(t.value(ib)));
        if (t.requires_grad(ib)) t.AccumulateGrad(ib, g.cwiseProduct(t.value(ia)));
      });
}

Var AddRowBroadcast(Var a, Var bias) {
  CheckSameTape(a, bias);
  if (bias.rows() != 1 || bias.cols() != a.cols()) {
    throw std::invalid_argument("AddRowBroadcast: shape mismatch");
  }
  const int ia = a.id(), ib = bias.id();
  Matrix out = a.value();
  out.rowwise() += bias.value().row(0);
  return a.tape()->Record(std::move(out), AnyRequiresGrad({a, bias}),
                          [ia, ib](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(ia, g);
                            if (t.requires_grad(ib)) {
                              t.AccumulateGrad(ib, g.colwise().sum());
                            }
                          });
}

Var MulColumnBroadcast(Var a, Var v) {
  CheckSameTape(a, v);
  if (v.cols() != 1 || v.rows() != a.rows()) {
    throw std::invalid_argument("MulColumnBroadcast: shape mismatch");
  }
  const int ia = a.id(), iv = v.id();
  Matrix out = v.value().col(0).asDiagonal() * a.value();
  return a.tape()->Record(
      std::move(out), AnyRequiresGrad({a, v}),
      [ia, iv](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) {
          t.AccumulateGrad(ia, t.value(iv).col(0).asDiagonal() * g);
        }
        if (t.requires_grad(iv)) {
          t.AccumulateGrad(iv, g.cwiseProduct(t.value(ia)).rowwise().sum());
        }
      });
}

Var Scale(Var a, double s) {
  const int ia = a.id();
  return a.tape()->Record(a.value() * s, AnyRequiresGrad({a}),
                          [ia, s](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(ia, g * s);
                          });
}

Var ScaleBy(Var a, Var s) {
  CheckSameTape(a, s);
  if (s.value().size() != 1) throw std::invalid_argument("ScaleBy: s not 1x1");
  const int ia = a.id(), is = s.id();
  return a.tape()->Record(
      a.value() * s.scalar(), AnyRequiresGrad({a, s}),
      [ia, is](Tape& t, const Matrix& g) {
        if (t.requires_grad(ia)) t.AccumulateGrad(ia, g * t.value(is)(0, 0));
        if (t.requires_grad(is)) {
          t.AccumulateGrad(is, 0, 0, g.cwiseProduct(t.value(ia)).sum());
        }
      });
}

Var MulConstant(Var a, const Matrix& mask) {
  if (mask.rows() != a.rows() || mask.cols() != a.cols()) {
    throw std::invalid_argument("MulConstant: shape mismatch");
  }
  const int ia = a.id();
  return a.tape()->Record(a.value().cwiseProduct(mask), AnyRequiresGrad({a}),
                          [ia, mask](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(ia, g.cwiseProduct(mask));
                          });
}

// ---- Nonlinearities -------------------------------------------------------

Var Relu(Var a) {
  const int ia = a.id();
  return a.tape()->Record(a.value().cwiseMax(0.0), AnyRequiresGrad({a}),
                          [ia](Tape& t, const Matrix& g) {
                            const Matrix& x = t.value(ia);
                            t.AccumulateGrad(
                                ia, (x.array() > 0.0).select(g, 0.0).matrix());
                          });
}

Var Sigmoid(Var a) {
  const int ia = a.id();
  Matrix out = (1.0 + (-a.value().array()).exp()).inverse().matrix();
  Tape* tape = a.tape();
  const int out_id = static_cast<int>(tape->node_count());
  return tape->Record(std::move(out), AnyRequiresGrad({a}),
                      [ia, out_id](Tape& t, const Matrix& g) {
                        const auto y = t.value(out_id).array();
                        t.AccumulateGrad(
                            ia, (g.array() * y * (1.0 - y)).matrix());
                      });
}

namespace {

Matrix SoftmaxRows(const Matrix& a, const BoolMatrix* mask) {
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    double max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (mask == nullptr || (*mask)(r, c)) max = std::max(max, a(r, c));
    }
    if (!std::isfinite(max)) {
      throw NumericError("softmax row has no finite admissible entry");
    }
    double total = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (mask == nullptr || (*mask)(r, c)) {
        out(r, c) = std::exp(a(r, c) - max);
        total += out(r, c);
      }
    }
    out.row(r) /= total;
  }
  return out;
}

Var SoftmaxImpl(Var a, const BoolMatrix* mask) {
  const int ia = a.id();
  Tape* tape = a.tape();
  const int out_id = static_cast<int>(tape->node_count());
  return tape->Record(SoftmaxRows(a.value(), mask), AnyRequiresGrad({a}),
                      [ia, out_id](Tape& t, const Matrix& g) {
                        const Matrix& y = t.value(out_id);
                        // dx = y * (g - <g, y>_row); masked y are 0.
                        const Vector dot = g.cwiseProduct(y).rowwise().sum();
                        Matrix dx = y.cwiseProduct(g - dot.replicate(1, g.cols()));
                        t.AccumulateGrad(ia, dx);
                      });
}

}  // namespace

Var RowSoftmax(Var a) { return SoftmaxImpl(a, nullptr); }

Var MaskedRowSoftmax(Var a, const BoolMatrix& mask) {
  if (mask.rows() != a.rows() || mask.cols() != a.cols()) {
    throw std::invalid_argument("MaskedRowSoftmax: mask shape mismatch");
  }
  return SoftmaxImpl(a, &mask);
}

Var MaskedRowLogSumExp(Var a, const BoolMatrix& mask) {
  if (mask.rows() != a.rows() || mask.cols() != a.cols()) {
    throw std::invalid_argument("MaskedRowLogSumExp: mask shape mismatch");
  }
  const Matrix& x = a.value();
  const Matrix probs = SoftmaxRows(x, &mask);
  Matrix out(x.rows(), 1);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (mask(r, c)) max = std::max(max, x(r, c));
    }
    double total = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (mask(r, c)) total += std::exp(x(r, c) - max);
    }
    out(r, 0) = max + std::log(total);
  }
  const int ia = a.id();
  return a.tape()->Record(std::move(out), AnyRequiresGrad({a}),
                          [ia, probs](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(
                                ia, g.col(0).asDiagonal() * probs);
                          });
}

// ---- Shape manipulation ---------------------------------------------------

Var ConcatCols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatCols: no parts");
  Tape* tape = parts.front().tape();
  const int rows = parts.front().rows();
  int cols = 0;
  bool grad = false;
  std::vector<int> ids, widths;
  for (const Var& p : parts) {
    if (p.tape() != tape || p.rows() != rows) {
      throw std::invalid_argument("ConcatCols: shape mismatch");
    }
    cols += p.cols();
    grad = grad || tape->requires_grad(p);
    ids.push_back(p.id());
    widths.push_back(p.cols());
  }
  Matrix out(rows, cols);
  int offset = 0;
  for (const Var& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
  }
  return tape->Record(std::move(out), grad,
                      [ids, widths](Tape& t, const Matrix& g) {
                        int off = 0;
                        for (std::size_t k = 0; k < ids.size(); ++k) {
                          if (t.requires_grad(ids[k])) {
                            t.AccumulateGrad(ids[k], g.middleCols(off, widths[k]));
                          }
                          off += widths[k];
                        }
                      });
}

Var SliceCols(Var a, int begin, int count) {
  if (begin < 0 || count < 0 || begin + count > a.cols()) {
    throw std::invalid_argument("SliceCols: out of range");
  }
  const int ia = a.id();
  const int rows = a.rows(), cols = a.cols();
  return a.tape()->Record(a.value().middleCols(begin, count),
                          AnyRequiresGrad({a}),
                          [ia, rows, cols, begin, count](Tape& t, const Matrix& g) {
                            Matrix full = Matrix::Zero(rows, cols);
                            full.middleCols(begin, count) = g;
                            t.AccumulateGrad(ia, full);
                          });
}

Var GatherRows(Var a, std::span<const int> rows) {
  const Matrix& x = a.value();
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= x.rows()) {
      throw std::invalid_argument("GatherRows: index out of range");
    }
    out.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
  }
  const int ia = a.id();
  const int src_rows = a.rows();
  std::vector<int> index(rows.begin(), rows.end());
  return a.tape()->Record(std::move(out), AnyRequiresGrad({a}),
                          [ia, src_rows, index](Tape& t, const Matrix& g) {
                            Matrix full = Matrix::Zero(src_rows, g.cols());
                            for (std::size_t r = 0; r < index.size(); ++r) {
                              full.row(index[r]) += g.row(static_cast<Eigen::Index>(r));
                            }
                            t.AccumulateGrad(ia, full);
                          });
}

Var ScatterColumn(Var values, std::span<const int> row, std::span<const int> col,
                  int rows, int cols) {
  if (values.cols() != 1 || row.size() != col.size() ||
      static_cast<int>(row.size()) != values.rows()) {
    throw std::invalid_argument("ScatterColumn: shape mismatch");
  }
  Matrix out = Matrix::Zero(rows, cols);
  const Matrix& v = values.value();
  for (std::size_t p = 0; p < row.size(); ++p) {
    out(row[p], col[p]) = v(static_cast<Eigen::Index>(p), 0);
  }
  const int iv = values.id();
  std::vector<int> r(row.begin(), row.end()), c(col.begin(), col.end());
  return values.tape()->Record(std::move(out), AnyRequiresGrad({values}),
                               [iv, r, c](Tape& t, const Matrix& g) {
                                 Matrix dv(static_cast<Eigen::Index>(r.size()), 1);
                                 for (std::size_t p = 0; p < r.size(); ++p) {
                                   dv(static_cast<Eigen::Index>(p), 0) = g(r[p], c[p]);
                                 }
                                 t.AccumulateGrad(iv, dv);
                               });
}

// ---- Reductions -----------------------------------------------------------

Var Sum(Var a) {
  const int ia = a.id();
  const int rows = a.rows(), cols = a.cols();
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape()->Record(std::move(out), AnyRequiresGrad({a}),
                          [ia, rows, cols](Tape& t, const Matrix& g) {
                            t.AccumulateGrad(ia, Matrix::Constant(rows, cols, g(0, 0)));
                          });
}

Var WeightedLayerSum(std::span<const Var> layers, Var weights) {
  if (layers.empty() || weights.rows() != 1 ||
      weights.cols() != static_cast<int>(layers.size())) {
    throw std::invalid_argument("WeightedLayerSum: shape mismatch");
  }
  const Matrix& w = weights.value();
  Matrix out = Matrix::Zero(layers[0].rows(), layers[0].cols());
  std::vector<int> ids;
  for (std::size_t j = 0; j < layers.size(); ++j) {
    if (layers[j].tape() != weights.tape() || layers[j].rows() != out.rows() ||
        layers[j].cols() != out.cols()) {
      throw std::invalid_argument("WeightedLayerSum: layer shape mismatch");
    }
    out += w(0, static_cast<Eigen::Index>(j)) * layers[j].value();
    ids.push_back(layers[j].id());
  }
  const int iw = weights.id();
  return weights.tape()->Record(
      std::move(out), AnyRequiresGrad({weights}),
      [iw, ids](Tape& t, const Matrix& g) {
        Matrix dw(1, static_cast<Eigen::Index>(ids.size()));
        for (std::size_t j = 0; j < ids.size(); ++j) {
          dw(0, static_cast<Eigen::Index>(j)) = g.cwiseProduct(t.value(ids[j])).sum();
        }
        t.AccumulateGrad(iw, dw);
      });
}

Var BinaryLogLikelihood(Var scores, std::span<const double> labels) {
  if (scores.cols() != 1 || scores.rows() != static_cast<int>(labels.size())) {
    throw std::invalid_argument("BinaryLogLikelihood: shape mismatch");
  }
  constexpr double kLow = 1e-7;
  constexpr double kHigh = 1.0 - 1e-7;
  const Matrix& s = scores.value();
  Matrix grad(s.rows(), 1);
  double total = 0.0;
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    const double y = labels[static_cast<std::size_t>(r)];
    const double raw = 1.0 / (1.0 + std::exp(-s(r, 0)));
    const double p = std::clamp(raw, kLow, kHigh);
    total += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    grad(r, 0) = (raw > kLow && raw < kHigh) ? (y - p) : 0.0;
  }
  Matrix out(1, 1);
  out(0, 0) = total;
  const int is = scores.id();
  return scores.tape()->Record(std::move(out), AnyRequiresGrad({scores}),
                               [is, grad](Tape& t, const Matrix& g) {
                                 t.AccumulateGrad(is, grad * g(0, 0));
                               });
}

}  // namespace evcoref::nn
