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

#include <span>

#include "elsr/tensor.hpp"

namespace elsr {

// Weights of a stride-1, pad-1 3x3 convolution.
template <typename T>
struct ConvParams {
  BasicTensor<T> weight;  // [Cout, Cin, 3, 3]
  std::vector<T> bias;    // Cout
};

// Forward kernels. All of them leave their inputs untouched and return a
// freshly allocated result.

// Zero-padded 3x3 convolution; spatial size is preserved.
template <typename T>
BasicTensor<T> conv2d_3x3(const BasicTensor<T>& input,
                          const BasicTensor<T>& weight,
                          std::span<const T> bias);

template <typename T>
BasicTensor<T> conv2d_3x3(const BasicTensor<T>& input,
                          const ConvParams<T>& params) {
  return conv2d_3x3(input, params.weight, std::span<const T>(params.bias));
}

// Per-channel parametric ReLU: x >= 0 ? x : slopes[c] * x.
template <typename T>
BasicTensor<T> prelu(const BasicTensor<T>& input, std::span<const T> slopes);

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input);

template <typename T>
BasicTensor<T> leaky_relu(const BasicTensor<T>& input, T slope);

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b);

// [N, C*r*r, H, W] -> [N, C, H*r, W*r] with
// out[n, c, y*r + i, x*r + j] = in[n, c*r*r + i*r + j, y, x].
template <typename T>
BasicTensor<T> pixel_shuffle(const BasicTensor<T>& input, int r);

// Exact inverse of pixel_shuffle.
template <typename T>
BasicTensor<T> pixel_unshuffle(const BasicTensor<T>& input, int r);

// out[n, c, y, x] = in[n, c, y / r, x / r].
template <typename T>
BasicTensor<T> nearest_upsample(const BasicTensor<T>& input, int r);

}  // namespace elsr
