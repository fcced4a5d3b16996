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

#include "elsr/autodiff.hpp"

#include "elsr/im2col.hpp"

#include <algorithm>
#include <string>

namespace elsr {

template <typename T>
void conv2d_3x3_backward(const BasicTensor<T>& input,
                         const BasicTensor<T>& weight,
                         const BasicTensor<T>& grad_out,
                         BasicTensor<T>* grad_input,
                         BasicTensor<T>* grad_weight, std::span<T> grad_bias) {
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  const Shape& gs = grad_out.shape();
  if (gs != Shape{is.n, ws.n, is.h, is.w}) {
    throw Error("conv2d_3x3_backward: upstream gradient shape " + gs.str() +
                " does not match forward output");
  }
  const std::int64_t hw = is.h * is.w;
  const std::int64_t k = is.c * 9;
  std::vector<T> col;
  std::vector<T> gcol;
  if (grad_weight) col.resize(static_cast<std::size_t>(k * hw));
  if (grad_input) gcol.resize(static_cast<std::size_t>(k * hw));

  for (std::int64_t n = 0; n < is.n; ++n) {
    const T* go = grad_out.plane(n, 0);
    if (!grad_bias.empty()) {
      for (std::int64_t co = 0; co < ws.n; ++co) {
        T acc{0};
        for (std::int64_t i = 0; i < hw; ++i) acc += go[co * hw + i];
        grad_bias[static_cast<std::size_t>(co)] += acc;
      }
    }
    if (grad_weight) {
      im2col_3x3(input.plane(n, 0), is.c, is.h, is.w, col.data());
      gemm_nt_acc(go, col.data(), grad_weight->data().data(), ws.n, k, hw);
    }
    if (grad_input) {
      std::fill(gcol.begin(), gcol.end(), T{0});
      gemm_tn_acc(weight.data().data(), go, gcol.data(), ws.n, k, hw);
      col2im_3x3_add(gcol.data(), is.c, is.h, is.w, grad_input->plane(n, 0));
    }
  }
}

template <typename T>
void prelu_backward(const BasicTensor<T>& input, std::span<const T> slopes,
                    const BasicTensor<T>& grad_out, BasicTensor<T>* grad_input,
                    std::span<T> grad_slopes) {
  const Shape& s = input.shape();
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      const T a = slopes[static_cast<std::size_t>(c)];
      const T* x = input.plane(n, c);
      const T* g = grad_out.plane(n, c);
      T* gi = grad_input ? grad_input->plane(n, c) : nullptr;
      T acc{0};
      for (std::int64_t i = 0; i < s.plane(); ++i) {
        if (x[i] >= T{0}) {
          if (gi) gi[i] += g[i];
        } else {
          if (gi) gi[i] += a * g[i];
          acc += x[i] * g[i];
        }
      }
      if (!grad_slopes.empty()) grad_slopes[static_cast<std::size_t>(c)] += acc;
    }
  }
}

namespace {

template <typename T>
void accumulate(BasicTensor<T>& dst, const BasicTensor<T>& src) {
  auto d = dst.data();
  auto s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

}  // namespace

template <typename T>
Var Tape<T>::push(TensorT value, bool requires_grad, bool is_op,
                  std::function<void(Tape&, Node&)> backward) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.is_op = is_op;
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  if (is_op) ++op_count_;
  return Var{nodes_.size() - 1};
}

template <typename T>
typename Tape<T>::Node& Tape<T>::node(Var v) {
  if (!v.valid() || v.id >= nodes_.size()) {
    throw Error("tape: variable " + std::to_string(v.id) + " is not recorded");
  }
  return nodes_[v.id];
}

template <typename T>
const typename Tape<T>::Node& Tape<T>::node(Var v) const {
  if (!v.valid() || v.id >= nodes_.size()) {
    throw Error("tape: variable " + std::to_string(v.id) + " is not recorded");
  }
  return nodes_[v.id];
}

template <typename T>
Var Tape<T>::constant(TensorT value) {
  return push(std::move(value), false, false, nullptr);
}

template <typename T>
Var Tape<T>::parameter(TensorT value) {
  return push(std::move(value), true, false, nullptr);
}

template <typename T>
Var Tape<T>::conv2d_3x3(Var x, Var weight, Var bias) {
  const TensorT& b = value(bias);
  if (b.numel() != value(weight).shape().n) {
    throw Error("tape conv2d_3x3: bias has " + std::to_string(b.numel()) +
                " elements, weight Cout is " +
                std::to_string(value(weight).shape().n));
  }
  TensorT out = elsr::conv2d_3x3(value(x), value(weight), b.data());
  const bool rg = needs_grad(x) || needs_grad(weight) || needs_grad(bias);
  return push(std::move(out), rg, true, [x, weight, bias](Tape& t, Node& self) {
    TensorT* gi = t.needs_grad(x) ? &t.grad_of(x) : nullptr;
    TensorT* gw = t.needs_grad(weight) ? &t.grad_of(weight) : nullptr;
    std::span<T> gb = t.needs_grad(bias) ? t.grad_of(bias).data()
                                         : std::span<T>();
    conv2d_3x3_backward(t.value(x), t.value(weight), self.grad, gi, gw, gb);
  });
}

template <typename T>
Var Tape<T>::prelu(Var x, Var slopes) {
  TensorT out = elsr::prelu(value(x), value(slopes).data());
  const bool rg = needs_grad(x) || needs_grad(slopes);
  return push(std::move(out), rg, true, [x, slopes](Tape& t, Node& self) {
    TensorT* gi = t.needs_grad(x) ? &t.grad_of(x) : nullptr;
    std::span<T> gs = t.needs_grad(slopes) ? t.grad_of(slopes).data()
                                           : std::span<T>();
    prelu_backward(t.value(x), t.value(slopes).data(), self.grad, gi, gs);
  });
}

template <typename T>
Var Tape<T>::relu(Var x) {
  TensorT out = elsr::relu(value(x));
  return push(std::move(out), needs_grad(x), true, [x](Tape& t, Node& self) {
    if (!t.needs_grad(x)) return;
    auto in = t.value(x).data();
    auto g = self.grad.data();
    auto d = t.grad_of(x).data();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (in[i] > T{0}) d[i] += g[i];
    }
  });
}

template <typename T>
Var Tape<T>::leaky_relu(Var x, T slope) {
  TensorT out = elsr::leaky_relu(value(x), slope);
  return push(std::move(out), needs_grad(x), true,
              [x, slope](Tape& t, Node& self) {
                if (!t.needs_grad(x)) return;
                auto in = t.value(x).data();
                auto g = self.grad.data();
                auto d = t.grad_of(x).data();
                for (std::size_t i = 0; i < d.size(); ++i) {
                  d[i] += in[i] >= T{0} ? g[i] : slope * g[i];
                }
              });
}

template <typename T>
Var Tape<T>::add(Var a, Var b) {
  TensorT out = elsr::add(value(a), value(b));
  const bool rg = needs_grad(a) || needs_grad(b);
  return push(std::move(out), rg, true, [a, b](Tape& t, Node& self) {
    if (t.needs_grad(a)) accumulate(t.grad_of(a), self.grad);
    if (t.needs_grad(b)) accumulate(t.grad_of(b), self.grad);
  });
}

template <typename T>
Var Tape<T>::pixel_shuffle(Var x, int r) {
  TensorT out = elsr::pixel_shuffle(value(x), r);
  return push(std::move(out), needs_grad(x), true, [x, r](Tape& t, Node& self) {
    if (!t.needs_grad(x)) return;
    // The shuffle is a permutation; its adjoint is the inverse permutation.
    accumulate(t.grad_of(x), elsr::pixel_unshuffle(self.grad, r));
  });
}

template <typename T>
Var Tape<T>::l1_loss(Var pred, Var target) {
  const T v = elsr::l1_loss(value(pred), value(target));
  return push(TensorT(Shape{1, 1, 1, 1}, v), needs_grad(pred), true,
              [pred, target](Tape& t, Node& self) {
                if (!t.needs_grad(pred)) return;
                TensorT g = l1_loss_grad(t.value(pred), t.value(target));
                const T up = self.grad.data()[0];
                auto d = t.grad_of(pred).data();
                auto s = g.data();
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += up * s[i];
              });
}

template <typename T>
Var Tape<T>::mse_loss(Var pred, Var target) {
  const T v = elsr::mse_loss(value(pred), value(target));
  return push(TensorT(Shape{1, 1, 1, 1}, v), needs_grad(pred), true,
              [pred, target](Tape& t, Node& self) {
                if (!t.needs_grad(pred)) return;
                TensorT g = mse_loss_grad(t.value(pred), t.value(target));
                const T up = self.grad.data()[0];
                auto d = t.grad_of(pred).data();
                auto s = g.data();
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += up * s[i];
              });
}

template <typename T>
void Tape<T>::backward(Var root, T seed) {
  Node& r = node(root);
  if (op_count_ == 0 || !r.is_op) {
    throw Error("backward: no forward operation recorded for the root value");
  }
  for (Node& n : nodes_) {
    if (n.requires_grad) {
      n.grad = TensorT(n.value.shape());
    } else {
      n.grad = TensorT();
    }
  }
  if (!r.requires_grad) return;
  r.grad.fill(seed);
  for (std::size_t i = root.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.is_op && n.requires_grad) n.backward(*this, n);
  }
}

template <typename T>
const typename Tape<T>::TensorT& Tape<T>::value(Var v) const {
  return node(v).value;
}

template <typename T>
const typename Tape<T>::TensorT& Tape<T>::grad(Var v) const {
  const Node& n = node(v);
  if (!n.requires_grad || n.grad.shape() != n.value.shape()) {
    throw Error("tape: no gradient available for variable " +
                std::to_string(v.id));
  }
  return n.grad;
}

template <typename T>
void Tape<T>::clear() {
  nodes_.clear();
  op_count_ = 0;
}

template void conv2d_3x3_backward(const Tensor&, const Tensor&, const Tensor&,
                                  Tensor*, Tensor*, std::span<float>);
template void conv2d_3x3_backward(const TensorD&, const TensorD&,
                                  const TensorD&, TensorD*, TensorD*,
                                  std::span<double>);
template void prelu_backward(const Tensor&, std::span<const float>,
                             const Tensor&, Tensor*, std::span<float>);
template void prelu_backward(const TensorD&, std::span<const double>,
                             const TensorD&, TensorD*, std::span<double>);

template class Tape<float>;
template class Tape<double>;

}  // namespace elsr
