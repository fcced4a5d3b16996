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

#include "elsr/im2col.hpp"

#include <algorithm>

namespace elsr {

namespace {

constexpr std::int64_t kTile = 512;

}  // namespace

template <typename T>
void im2col_3x3(const T* image, std::int64_t channels, std::int64_t h,
                std::int64_t w, T* col) {
  const std::int64_t hw = h * w;
  for (std::int64_t ci = 0; ci < channels; ++ci) {
    const T* src = image + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        T* row = col + (ci * 9 + ky * 3 + kx) * hw;
        const std::int64_t x0 = std::max<std::int64_t>(0, 1 - kx);
        const std::int64_t x1 = std::min<std::int64_t>(w, w + 1 - kx);
        for (std::int64_t y = 0; y < h; ++y) {
          T* dst = row + y * w;
          const std::int64_t iy = y + ky - 1;
          if (iy < 0 || iy >= h) {
            std::fill(dst, dst + w, T{0});
            continue;
          }
          const T* s = src + iy * w + (kx - 1);
          for (std::int64_t x = 0; x < x0; ++x) dst[x] = T{0};
          for (std::int64_t x = x0; x < x1; ++x) dst[x] = s[x];
          for (std::int64_t x = x1; x < w; ++x) dst[x] = T{0};
        }
      }
    }
  }
}

template <typename T>
void col2im_3x3_add(const T* col, std::int64_t channels, std::int64_t h,
                    std::int64_t w, T* image) {
  const std::int64_t hw = h * w;
  for (std::int64_t ci = 0; ci < channels; ++ci) {
    T* dst = image + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const T* row = col + (ci * 9 + ky * 3 + kx) * hw;
        const std::int64_t x0 = std::max<std::int64_t>(0, 1 - kx);
        const std::int64_t x1 = std::min<std::int64_t>(w, w + 1 - kx);
        const std::int64_t y0 = std::max<std::int64_t>(0, 1 - ky);
        const std::int64_t y1 = std::min<std::int64_t>(h, h + 1 - ky);
        for (std::int64_t y = y0; y < y1; ++y) {
          const T* s = row + y * w;
          T* d = dst + (y + ky - 1) * w + (kx - 1);
          for (std::int64_t x = x0; x < x1; ++x) d[x] += s[x];
        }
      }
    }
  }
}

template <typename T>
void gemm_acc(const T* a, const T* b, T* out, std::int64_t m, std::int64_t k,
              std::int64_t p) {
  for (std::int64_t p0 = 0; p0 < p; p0 += kTile) {
    const std::int64_t pn = std::min(kTile, p - p0);
    std::int64_t mi = 0;
    for (; mi + 4 <= m; mi += 4) {
      T* o0 = out + (mi + 0) * p + p0;
      T* o1 = out + (mi + 1) * p + p0;
      T* o2 = out + (mi + 2) * p + p0;
      T* o3 = out + (mi + 3) * p + p0;
      for (std::int64_t kk = 0; kk < k; ++kk) {
        const T* br = b + kk * p + p0;
        const T a0 = a[(mi + 0) * k + kk];
        const T a1 = a[(mi + 1) * k + kk];
        const T a2 = a[(mi + 2) * k + kk];
        const T a3 = a[(mi + 3) * k + kk];
        for (std::int64_t j = 0; j < pn; ++j) {
          const T bv = br[j];
          o0[j] += a0 * bv;
          o1[j] += a1 * bv;
          o2[j] += a2 * bv;
          o3[j] += a3 * bv;
        }
      }
    }
    for (; mi < m; ++mi) {
      T* o = out + mi * p + p0;
      for (std::int64_t kk = 0; kk < k; ++kk) {
        const T* br = b + kk * p + p0;
        const T av = a[mi * k + kk];
        for (std::int64_t j = 0; j < pn; ++j) o[j] += av * br[j];
      }
    }
  }
}

template <typename T>
void gemm_nt_acc(const T* a, const T* b, T* out, std::int64_t m,
                 std::int64_t k, std::int64_t p) {
  constexpr int kLanes = 8;
  for (std::int64_t mi = 0; mi < m; ++mi) {
    const T* ar = a + mi * p;
    for (std::int64_t kk = 0; kk < k; ++kk) {
      const T* br = b + kk * p;
      T acc[kLanes] = {};
      std::int64_t j = 0;
      for (; j + kLanes <= p; j += kLanes) {
        for (int l = 0; l < kLanes; ++l) acc[l] += ar[j + l] * br[j + l];
      }
      T sum{0};
      for (; j < p; ++j) sum += ar[j] * br[j];
      for (int l = 0; l < kLanes; ++l) sum += acc[l];
      out[mi * k + kk] += sum;
    }
  }
}

template <typename T>
void gemm_tn_acc(const T* a, const T* b, T* out, std::int64_t m,
                 std::int64_t k, std::int64_t p) {
  for (std::int64_t p0 = 0; p0 < p; p0 += kTile) {
    const std::int64_t pn = std::min(kTile, p - p0);
    for (std::int64_t kk = 0; kk < k; ++kk) {
      T* o = out + kk * p + p0;
      for (std::int64_t mi = 0; mi < m; ++mi) {
        const T av = a[mi * k + kk];
        const T* br = b + mi * p + p0;
        for (std::int64_t j = 0; j < pn; ++j) o[j] += av * br[j];
      }
    }
  }
}

#define ELSR_INSTANTIATE_LOWERING(T)                                          \
  template void im2col_3x3(const T*, std::int64_t, std::int64_t,              \
                           std::int64_t, T*);                                 \
  template void col2im_3x3_add(const T*, std::int64_t, std::int64_t,          \
                               std::int64_t, T*);                             \
  template void gemm_acc(const T*, const T*, T*, std::int64_t, std::int64_t,  \
                         std::int64_t);                                       \
  template void gemm_nt_acc(const T*, const T*, T*, std::int64_t,             \
                            std::int64_t, std::int64_t);                      \
  template void gemm_tn_acc(const T*, const T*, T*, std::int64_t,             \
                            std::int64_t, std::int64_t);

ELSR_INSTANTIATE_LOWERING(float)
ELSR_INSTANTIATE_LOWERING(double)

#undef ELSR_INSTANTIATE_LOWERING

}  // namespace elsr
