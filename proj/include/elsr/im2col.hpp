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

#include <cstdint>
#include <span>

namespace elsr {

// Lowering helpers for the 3x3 / stride 1 / pad 1 convolution. A column
// buffer holds Cin*9 rows of H*W samples, row index ci*9 + ky*3 + kx.

template <typename T>
void im2col_3x3(const T* image, std::int64_t channels, std::int64_t h,
                std::int64_t w, T* col);

// Scatter-adds a column buffer back onto a [channels, h, w] image.
template <typename T>
void col2im_3x3_add(const T* col, std::int64_t channels, std::int64_t h,
                    std::int64_t w, T* image);

// out[m][p] += sum_k a[m][k] * b[k][p] for a row-major [M, K] x [K, P].
template <typename T>
void gemm_acc(const T* a, const T* b, T* out, std::int64_t m, std::int64_t k,
              std::int64_t p);

// out[m][k] += sum_p a[m][p] * b[k][p] (second operand transposed).
template <typename T>
void gemm_nt_acc(const T* a, const T* b, T* out, std::int64_t m,
                 std::int64_t k, std::int64_t p);

// out[k][p] += sum_m a[m][k] * b[m][p] (first operand transposed).
template <typename T>
void gemm_tn_acc(const T* a, const T* b, T* out, std::int64_t m,
                 std::int64_t k, std::int64_t p);

}  // namespace elsr
