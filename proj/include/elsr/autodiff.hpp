/* Copyright 2026 The ELSR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "elsr/loss.hpp"
#include "elsr/ops.hpp"

namespace elsr {

// Backward kernels. Each accumulates (+=) into the provided gradient
// buffers; any of the output pointers may be null to skip that gradient.

template <typename T>
void conv2d_3x3_backward(const BasicTensor<T>& input,
                         const BasicTensor<T>& weight,
                         const BasicTensor<T>& grad_out,
                         BasicTensor<T>* grad_input,
                         BasicTensor<T>* grad_weight, std::span<T> grad_bias);

template <typename T>
void prelu_backward(const BasicTensor<T>& input, std::span<const T> slopes,
                    const BasicTensor<T>& grad_out, BasicTensor<T>* grad_input,
                    std::span<T> grad_slopes);

// Handle to a value recorded on a Tape.
struct Var {
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t id = kNone;
  bool valid() const { return id != kNone; }
};

// Reverse-mode tape. Forward ops are evaluated eagerly and appended in
// execution order; backward() walks the record in exact reverse order.
// Per-channel vectors (bias, PReLU slopes) are tensors with numel == C.
template <typename T>
class Tape {
 public:
  using TensorT = BasicTensor<T>;

  // Leaf that never receives a gradient (network input, targets).
  Var constant(TensorT value);
  // Leaf that receives a gradient of identical shape after backward().
  Var parameter(TensorT value);

  Var conv2d_3x3(Var x, Var weight, Var bias);
  Var prelu(Var x, Var slopes);
  Var relu(Var x);
  Var leaky_relu(Var x, T slope);
  Var add(Var a, Var b);
  Var pixel_shuffle(Var x, int r);
  // Scalar [1,1,1,1] losses; target is treated as a constant.
  Var l1_loss(Var pred, Var target);
  Var mse_loss(Var pred, Var target);
  Var loss(LossKind kind, Var pred, Var target) {
    return kind == LossKind::L1 ? l1_loss(pred, target)
                                : mse_loss(pred, target);
  }

  // Seeds d(root) with `seed` in every element and propagates. Gradients of
  // all parameters are reset first, so repeated calls do not accumulate.
  void backward(Var root, T seed = T{1});

  const TensorT& value(Var v) const;
  const TensorT& grad(Var v) const;
  std::size_t op_count() const { return op_count_; }
  void clear();

 private:
  struct Node {
    TensorT value;
    TensorT grad;
    bool requires_grad = false;
    bool is_op = false;
    std::function<void(Tape&, Node&)> backward;
  };

  Var push(TensorT value, bool requires_grad, bool is_op,
           std::function<void(Tape&, Node&)> backward);
  Node& node(Var v);
  const Node& node(Var v) const;
  TensorT& grad_of(Var v) { return node(v).grad; }
  bool needs_grad(Var v) const { return node(v).requires_grad; }

  std::vector<Node> nodes_;
  std::size_t op_count_ = 0;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace elsr
