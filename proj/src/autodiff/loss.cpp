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

#include "elsr/loss.hpp"

#include <cmath>
#include <string>

namespace elsr {

const char* to_string(LossKind kind) {
  return kind == LossKind::L1 ? "L1" : "MSE";
}

LossKind parse_loss_kind(const std::string& text) {
  if (text == "L1" || text == "l1") return LossKind::L1;
  if (text == "MSE" || text == "mse" || text == "L2" || text == "l2") {
    return LossKind::MSE;
  }
  throw Error("unknown loss kind '" + text + "' (expected L1 or MSE)");
}

namespace {

template <typename T>
void check_pair(const BasicTensor<T>& pred, const BasicTensor<T>& target,
                const char* name) {
  if (pred.shape() != target.shape()) {
    throw Error(std::string(name) + ": shape mismatch " + pred.shape().str() +
                " vs " + target.shape().str());
  }
  if (pred.numel() == 0) {
    throw Error(std::string(name) + ": empty tensors");
  }
}

}  // namespace

template <typename T>
T l1_loss(const BasicTensor<T>& pred, const BasicTensor<T>& target) {
  check_pair(pred, target, "l1_loss");
  auto p = pred.data();
  auto t = target.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(static_cast<double>(p[i]) - static_cast<double>(t[i]));
  }
  return static_cast<T>(sum / static_cast<double>(p.size()));
}

template <typename T>
BasicTensor<T> l1_loss_grad(const BasicTensor<T>& pred,
                            const BasicTensor<T>& target) {
  check_pair(pred, target, "l1_loss");
  BasicTensor<T> g(pred.shape());
  auto p = pred.data();
  auto t = target.data();
  auto out = g.data();
  const T inv = T{1} / static_cast<T>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T d = p[i] - t[i];
    out[i] = d > T{0} ? inv : (d < T{0} ? -inv : T{0});
  }
  return g;
}

template <typename T>
T mse_loss(const BasicTensor<T>& pred, const BasicTensor<T>& target) {
  check_pair(pred, target, "mse_loss");
  auto p = pred.data();
  auto t = target.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
    sum += d * d;
  }
  return static_cast<T>(sum / static_cast<double>(p.size()));
}

template <typename T>
BasicTensor<T> mse_loss_grad(const BasicTensor<T>& pred,
                             const BasicTensor<T>& target) {
  check_pair(pred, target, "mse_loss");
  BasicTensor<T> g(pred.shape());
  auto p = pred.data();
  auto t = target.data();
  auto out = g.data();
  const T scale = T{2} / static_cast<T>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = scale * (p[i] - t[i]);
  }
  return g;
}

template float l1_loss(const Tensor&, const Tensor&);
template double l1_loss(const TensorD&, const TensorD&);
template Tensor l1_loss_grad(const Tensor&, const Tensor&);
template TensorD l1_loss_grad(const TensorD&, const TensorD&);
template float mse_loss(const Tensor&, const Tensor&);
template double mse_loss(const TensorD&, const TensorD&);
template Tensor mse_loss_grad(const Tensor&, const Tensor&);
template TensorD mse_loss_grad(const TensorD&, const TensorD&);

}  // namespace elsr
