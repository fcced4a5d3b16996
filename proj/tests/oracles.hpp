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

// Test-only reference implementations. These deliberately avoid the library
// kernels they are used to check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "elsr/image.hpp"
#include "elsr/tensor.hpp"

namespace elsr::testing {

inline Tensor random_tensor(Shape s, std::mt19937_64& rng, float lo = -1.0f,
                            float hi = 1.0f) {
  std::uniform_real_distribution<float> d(lo, hi);
  Tensor t(s);
  for (float& v : t.data()) v = d(rng);
  return t;
}

inline TensorD random_tensor_d(Shape s, std::mt19937_64& rng, double lo = -1.0,
                               double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  TensorD t(s);
  for (double& v : t.data()) v = d(rng);
  return t;
}

// Quadruple loop over (co, ci, dy, dx) per output sample, f64 accumulation,
// zero padding.
inline TensorD naive_conv3x3(const TensorD& in, const TensorD& w,
                             const std::vector<double>& bias) {
  const Shape s = in.shape();
  const std::int64_t cout = w.shape().n;
  TensorD out(Shape{s.n, cout, s.h, s.w});
  for (std::int64_t n = 0; n < s.n; ++n)
    for (std::int64_t co = 0; co < cout; ++co)
      for (std::int64_t y = 0; y < s.h; ++y)
        for (std::int64_t x = 0; x < s.w; ++x) {
          double acc = bias[static_cast<std::size_t>(co)];
          for (std::int64_t ci = 0; ci < s.c; ++ci)
            for (int dy = 0; dy < 3; ++dy)
              for (int dx = 0; dx < 3; ++dx) {
                const std::int64_t iy = y + dy - 1;
                const std::int64_t ix = x + dx - 1;
                if (iy < 0 || iy >= s.h || ix < 0 || ix >= s.w) continue;
                acc += w.at(co, ci, dy, dx) * in.at(n, ci, iy, ix);
              }
          out.at(n, co, y, x) = acc;
        }
  return out;
}

// Central differences of a scalar function of one tensor.
inline TensorD finite_difference(const std::function<double(const TensorD&)>& f,
                                 const TensorD& at, double h = 1e-3) {
  TensorD grad(at.shape());
  TensorD probe = at;
  for (std::size_t i = 0; i < probe.data().size(); ++i) {
    const double saved = probe.data()[i];
    probe.data()[i] = saved + h;
    const double up = f(probe);
    probe.data()[i] = saved - h;
    const double down = f(probe);
    probe.data()[i] = saved;
    grad.data()[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Relative error with an absolute floor so near-zero gradients compare
// sensibly: |a - b| / max(|a|, |b|, floor).
inline double rel_err(double a, double b, double floor = 1e-3) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double max_rel_err(const TensorD& a, const TensorD& b,
                          double floor = 1e-3) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, rel_err(a.data()[i], b.data()[i], floor));
  }
  return worst;
}

// Scalar Adam with bias correction, written out longhand.
struct ScalarAdam {
  double m = 0.0, v = 0.0;
  int t = 0;
  double step(double p, double g, double lr, double b1 = 0.9,
              double b2 = 0.999, double eps = 1e-8) {
    ++t;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    return p - lr * mh / (std::sqrt(vh) + eps);
  }
};

// Direct per-pixel bicubic resize: each output pixel is a 2-D sum of
// separable kernel weights computed on the spot, edge samples mirrored.
inline double keys_cubic(double x) {
  x = std::abs(x);
  if (x <= 1) return (1.5 * x - 2.5) * x * x + 1;
  if (x <= 2) return ((-0.5 * x + 2.5) * x - 4) * x + 2;
  return 0;
}

inline void reference_taps(int in_len, int out_len, int i,
                           std::vector<int>& idx, std::vector<double>& wts) {
  const double s = static_cast<double>(out_len) / in_len;
  const double support = s < 1 ? 2.0 / s : 2.0;
  const double center = (i + 0.5) / s - 0.5;  // 0-based source coordinate
  idx.clear();
  wts.clear();
  double sum = 0;
  for (int j = static_cast<int>(std::floor(center - support)) - 1;
       j <= static_cast<int>(std::ceil(center + support)) + 1; ++j) {
    const double d = center - j;
    const double wt = s < 1 ? s * keys_cubic(s * d) : keys_cubic(d);
    if (wt == 0) continue;
    int m = j;
    while (m < 0 || m >= in_len) m = m < 0 ? -m - 1 : 2 * in_len - m - 1;
    idx.push_back(m);
    wts.push_back(wt);
    sum += wt;
  }
  for (double& wt : wts) wt /= sum;
}

inline ImageBuffer reference_bicubic(const ImageBuffer& img, int ow, int oh) {
  ImageBuffer out(ow, oh);
  std::vector<int> yi, xi;
  std::vector<double> yw, xw;
  for (int y = 0; y < oh; ++y) {
    reference_taps(img.height(), oh, y, yi, yw);
    for (int x = 0; x < ow; ++x) {
      reference_taps(img.width(), ow, x, xi, xw);
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (std::size_t a = 0; a < yi.size(); ++a)
          for (std::size_t b = 0; b < xi.size(); ++b)
            acc += yw[a] * xw[b] * img.at(xi[b], yi[a], c);
        out.at(x, y, c) = static_cast<std::uint8_t>(
            std::lround(std::min(255.0, std::max(0.0, acc))));
      }
    }
  }
  return out;
}

}  // namespace elsr::testing
