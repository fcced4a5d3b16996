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

#include "elsr/tensor.hpp"

namespace elsr {

enum class LossKind { L1, MSE };

const char* to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& text);

// Mean absolute error over all elements.
template <typename T>
T l1_loss(const BasicTensor<T>& pred, const BasicTensor<T>& target);

// d(l1)/d(pred) = sign(pred - target) / count, with sign(0) = 0.
template <typename T>
BasicTensor<T> l1_loss_grad(const BasicTensor<T>& pred,
                            const BasicTensor<T>& target);

// Mean squared error over all elements.
template <typename T>
T mse_loss(const BasicTensor<T>& pred, const BasicTensor<T>& target);

// d(mse)/d(pred) = 2 (pred - target) / count.
template <typename T>
BasicTensor<T> mse_loss_grad(const BasicTensor<T>& pred,
                             const BasicTensor<T>& target);

template <typename T>
T loss_value(LossKind kind, const BasicTensor<T>& pred,
             const BasicTensor<T>& target) {
  return kind == LossKind::L1 ? l1_loss(pred, target) : mse_loss(pred, target);
}

}  // namespace elsr
