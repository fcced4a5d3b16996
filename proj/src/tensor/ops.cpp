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

#include "elsr/ops.hpp"

#include "elsr/im2col.hpp"

#include <algorithm>
#include <string>

namespace elsr {

namespace {

void require_same_shape(const Shape& a, const Shape& b, const char* op) {
  if (a != b) {
    throw Error(std::string(op) + ": shape mismatch " + a.str() + " vs " +
                b.str());
  }
}

void require_factor(int r, const char* op) {
  if (r < 1) {
    throw Error(std::string(op) + ": upscale factor must be >= 1, got " +
                std::to_string(r));
  }
}

}  // namespace

template <typename T>
BasicTensor<T> conv2d_3x3(const BasicTensor<T>& input,
                          const BasicTensor<T>& weight,
                          std::span<const T> bias) {
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  if (ws.h != 3 || ws.w != 3) {
    throw Error("conv2d_3x3: kernel extent must be 3x3, weight shape is " +
                ws.str());
  }
  if (ws.c != is.c) {
    throw Error("conv2d_3x3: input channels (dim 1) = " + std::to_string(is.c) +
                " but weight expects Cin = " + std::to_string(ws.c));
  }
  if (static_cast<std::int64_t>(bias.size()) != ws.n) {
    throw Error("conv2d_3x3: bias length " + std::to_string(bias.size()) +
                " does not match Cout = " + std::to_string(ws.n));
  }
  if (is.h < 1 || is.w < 1) {
    throw Error("conv2d_3x3: spatial extent must be >= 1, input is " +
                is.str());
  }

  const std::int64_t hw = is.h * is.w;
  const std::int64_t cout = ws.n;
  const std::int64_t k = is.c * 9;
  BasicTensor<T> out(Shape{is.n, cout, is.h, is.w});
  std::vector<T> col(static_cast<std::size_t>(k * hw));

  for (std::int64_t n = 0; n < is.n; ++n) {
    im2col_3x3(input.plane(n, 0), is.c, is.h, is.w, col.data());
    T* dst = out.plane(n, 0);
    for (std::int64_t co = 0; co < cout; ++co) {
      std::fill(dst + co * hw, dst + (co + 1) * hw,
                bias[static_cast<std::size_t>(co)]);
    }
    gemm_acc(weight.data().data(), col.data(), dst, cout, k, hw);
  }
  return out;
}

template <typename T>
BasicTensor<T> prelu(const BasicTensor<T>& input, std::span<const T> slopes) {
  const Shape& s = input.shape();
  if (static_cast<std::int64_t>(slopes.size()) != s.c) {
    throw Error("prelu: " + std::to_string(slopes.size()) +
                " slopes for " + std::to_string(s.c) + " channels");
  }
  BasicTensor<T> out(s);
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      const T a = slopes[static_cast<std::size_t>(c)];
      const T* src = input.plane(n, c);
      T* dst = out.plane(n, c);
      for (std::int64_t i = 0; i < s.plane(); ++i) {
        dst[i] = src[i] >= T{0} ? src[i] : a * src[i];
      }
    }
  }
  return out;
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input) {
  BasicTensor<T> out(input.shape());
  auto src = input.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] > T{0} ? src[i] : T{0};
  }
  return out;
}

template <typename T>
BasicTensor<T> leaky_relu(const BasicTensor<T>& input, T slope) {
  BasicTensor<T> out(input.shape());
  auto src = input.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] >= T{0} ? src[i] : slope * src[i];
  }
  return out;
}

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  require_same_shape(a.shape(), b.shape(), "add");
  BasicTensor<T> out(a.shape());
  auto x = a.data();
  auto y = b.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = x[i] + y[i];
  }
  return out;
}

template <typename T>
BasicTensor<T> pixel_shuffle(const BasicTensor<T>& input, int r) {
  require_factor(r, "pixel_shuffle");
  const Shape& s = input.shape();
  const std::int64_t rr = static_cast<std::int64_t>(r) * r;
  if (s.c % rr != 0) {
    throw Error("pixel_shuffle: channel count " + std::to_string(s.c) +
                " is not divisible by r^2 = " + std::to_string(rr));
  }
  const std::int64_t oc = s.c / rr;
  const std::int64_t ow = s.w * r;
  BasicTensor<T> out(Shape{s.n, oc, s.h * r, ow});
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < oc; ++c) {
      T* dst = out.plane(n, c);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
          const T* src = input.plane(n, c * rr + i * r + j);
          for (std::int64_t y = 0; y < s.h; ++y) {
            T* row = dst + (y * r + i) * ow + j;
            for (std::int64_t x = 0; x < s.w; ++x) {
              row[x * r] = src[y * s.w + x];
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
BasicTensor<T> pixel_unshuffle(const BasicTensor<T>& input, int r) {
  require_factor(r, "pixel_unshuffle");
  const Shape& s = input.shape();
  if (s.h % r != 0 || s.w % r != 0) {
    throw Error("pixel_unshuffle: spatial extents " + std::to_string(s.h) +
                "x" + std::to_string(s.w) + " are not divisible by " +
                std::to_string(r));
  }
  const std::int64_t rr = static_cast<std::int64_t>(r) * r;
  const std::int64_t oh = s.h / r;
  const std::int64_t ow = s.w / r;
  BasicTensor<T> out(Shape{s.n, s.c * rr, oh, ow});
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      const T* src = input.plane(n, c);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
          T* dst = out.plane(n, c * rr + i * r + j);
          for (std::int64_t y = 0; y < oh; ++y) {
            const T* row = src + (y * r + i) * s.w + j;
            for (std::int64_t x = 0; x < ow; ++x) {
              dst[y * ow + x] = row[x * r];
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
BasicTensor<T> nearest_upsample(const BasicTensor<T>& input, int r) {
  require_factor(r, "nearest_upsample");
  const Shape& s = input.shape();
  const std::int64_t ow = s.w * r;
  BasicTensor<T> out(Shape{s.n, s.c, s.h * r, ow});
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      const T* src = input.plane(n, c);
      T* dst = out.plane(n, c);
      for (std::int64_t y = 0; y < s.h * r; ++y) {
        const T* row = src + (y / r) * s.w;
        T* o = dst + y * ow;
        for (std::int64_t x = 0; x < ow; ++x) {
          o[x] = row[x / r];
        }
      }
    }
  }
  return out;
}

#define ELSR_INSTANTIATE_OPS(T)                                              \
  template BasicTensor<T> conv2d_3x3(const BasicTensor<T>&,                  \
                                     const BasicTensor<T>&,                  \
                                     std::span<const T>);                    \
  template BasicTensor<T> prelu(const BasicTensor<T>&, std::span<const T>);  \
  template BasicTensor<T> relu(const BasicTensor<T>&);                       \
  template BasicTensor<T> leaky_relu(const BasicTensor<T>&, T);              \
  template BasicTensor<T> add(const BasicTensor<T>&, const BasicTensor<T>&); \
  template BasicTensor<T> pixel_shuffle(const BasicTensor<T>&, int);         \
  template BasicTensor<T> pixel_unshuffle(const BasicTensor<T>&, int);       \
  template BasicTensor<T> nearest_upsample(const BasicTensor<T>&, int);

ELSR_INSTANTIATE_OPS(float)
ELSR_INSTANTIATE_OPS(double)

#undef ELSR_INSTANTIATE_OPS

}  // namespace elsr
