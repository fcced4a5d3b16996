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

#include "elsr/resize.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace elsr {

double cubic_kernel(double x) {
  const double ax = std::abs(x);
  const double ax2 = ax * ax;
  const double ax3 = ax2 * ax;
  if (ax <= 1.0) return 1.5 * ax3 - 2.5 * ax2 + 1.0;
  if (ax <= 2.0) return -0.5 * ax3 + 2.5 * ax2 - 4.0 * ax + 2.0;
  return 0.0;
}

AxisWeights axis_weights(int in_len, int out_len, bool antialias) {
  if (in_len < 1 || out_len < 1) {
    throw Error("axis_weights: lengths must be >= 1");
  }
  const double scale = static_cast<double>(out_len) / in_len;
  const bool widen = antialias && scale < 1.0;
  const double kernel_width = widen ? 4.0 / scale : 4.0;

  AxisWeights aw;
  aw.taps = static_cast<int>(std::ceil(kernel_width)) + 2;
  aw.indices.resize(static_cast<std::size_t>(out_len) * aw.taps);
  aw.weights.resize(aw.indices.size());

  const int period = 2 * in_len;
  for (int i = 0; i < out_len; ++i) {
    const double u = (i + 1) / scale + 0.5 * (1.0 - 1.0 / scale);
    const int left = static_cast<int>(std::floor(u - kernel_width / 2.0));
    double sum = 0.0;
    for (int k = 0; k < aw.taps; ++k) {
      const int idx1 = left + k;  // 1-based input coordinate
      const double d = u - idx1;
      const double w = widen ? scale * cubic_kernel(scale * d) : cubic_kernel(d);
      // Mirror onto [1, in_len]: sequence 1..n, n..1 repeated.
      int m = (idx1 - 1) % period;
      if (m < 0) m += period;
      const int idx0 = m < in_len ? m : period - 1 - m;
      aw.indices[static_cast<std::size_t>(i) * aw.taps + k] = idx0;
      aw.weights[static_cast<std::size_t>(i) * aw.taps + k] = w;
      sum += w;
    }
    double check = 0.0;
    for (int k = 0; k < aw.taps; ++k) {
      double& w = aw.weights[static_cast<std::size_t>(i) * aw.taps + k];
      w /= sum;
      check += w;
    }
    assert(std::abs(check - 1.0) < 1e-9);
    (void)check;
  }
  return aw;
}

ImageBuffer bicubic_resize(const ImageBuffer& image, int out_w, int out_h,
                           bool antialias) {
  if (out_w < 1 || out_h < 1) {
    throw Error("bicubic_resize: output size " + std::to_string(out_w) + "x" +
                std::to_string(out_h) + " must be at least 1x1");
  }
  const int in_w = image.width();
  const int in_h = image.height();
  if (in_w < 1 || in_h < 1) throw Error("bicubic_resize: empty input image");

  // Planar f64 working copy.
  std::vector<double> buf(static_cast<std::size_t>(in_w) * in_h * 3);
  for (int y = 0; y < in_h; ++y) {
    for (int x = 0; x < in_w; ++x) {
      for (int c = 0; c < 3; ++c) {
        buf[(static_cast<std::size_t>(c) * in_h + y) * in_w + x] =
            image.at(x, y, c);
      }
    }
  }
  int cur_w = in_w;
  int cur_h = in_h;

  auto resize_rows = [&](int new_h) {
    const AxisWeights aw = axis_weights(cur_h, new_h, antialias);
    std::vector<double> out(static_cast<std::size_t>(cur_w) * new_h * 3, 0.0);
    for (int c = 0; c < 3; ++c) {
      const double* src = &buf[static_cast<std::size_t>(c) * cur_h * cur_w];
      double* dst = &out[static_cast<std::size_t>(c) * new_h * cur_w];
      for (int y = 0; y < new_h; ++y) {
        double* row = dst + static_cast<std::size_t>(y) * cur_w;
        for (int k = 0; k < aw.taps; ++k) {
          const std::size_t t = static_cast<std::size_t>(y) * aw.taps + k;
          const double w = aw.weights[t];
          if (w == 0.0) continue;
          const double* in = src + static_cast<std::size_t>(aw.indices[t]) * cur_w;
          for (int x = 0; x < cur_w; ++x) row[x] += w * in[x];
        }
      }
    }
    buf.swap(out);
    cur_h = new_h;
  };

  auto resize_cols = [&](int new_w) {
    const AxisWeights aw = axis_weights(cur_w, new_w, antialias);
    std::vector<double> out(static_cast<std::size_t>(new_w) * cur_h * 3, 0.0);
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < cur_h; ++y) {
        const double* in =
            &buf[(static_cast<std::size_t>(c) * cur_h + y) * cur_w];
        double* row = &out[(static_cast<std::size_t>(c) * cur_h + y) * new_w];
        for (int x = 0; x < new_w; ++x) {
          double acc = 0.0;
          for (int k = 0; k < aw.taps; ++k) {
            const std::size_t t = static_cast<std::size_t>(x) * aw.taps + k;
            acc += aw.weights[t] * in[aw.indices[t]];
          }
          row[x] = acc;
        }
      }
    }
    buf.swap(out);
    cur_w = new_w;
  };

  // The axis with the stronger reduction goes first; ties resize rows first.
  const double sy = static_cast<double>(out_h) / in_h;
  const double sx = static_cast<double>(out_w) / in_w;
  if (sy <= sx) {
    if (out_h != in_h) resize_rows(out_h);
    if (out_w != in_w) resize_cols(out_w);
  } else {
    if (out_w != in_w) resize_cols(out_w);
    if (out_h != in_h) resize_rows(out_h);
  }

  ImageBuffer out(out_w, out_h);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        const double v =
            buf[(static_cast<std::size_t>(c) * out_h + y) * out_w + x];
        out.at(x, y, c) =
            static_cast<std::uint8_t>(std::round(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return out;
}

}  // namespace elsr
