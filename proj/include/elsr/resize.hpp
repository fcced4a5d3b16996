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

#include <vector>

#include "elsr/image.hpp"

namespace elsr {

// Cubic convolution kernel with a = -0.5.
double cubic_kernel(double x);

// Taps contributing to each output sample along one axis.
struct AxisWeights {
  int taps = 0;                // per output sample
  std::vector<int> indices;    // out_len * taps, already edge-mirrored
  std::vector<double> weights; // out_len * taps, each row sums to 1
};

// imresize-style contributions: output sample i (1-based) maps to input
// coordinate u = i / s + 0.5 * (1 - 1 / s); when downscaling the kernel is
// stretched by 1 / s for antialiasing. Out-of-range taps mirror
// symmetrically at the borders.
AxisWeights axis_weights(int in_len, int out_len, bool antialias = true);

// Separable bicubic resize computed in f64, rounded to u8 at the end.
ImageBuffer bicubic_resize(const ImageBuffer& image, int out_w, int out_h,
                           bool antialias = true);

}  // namespace elsr
