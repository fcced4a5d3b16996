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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "elsr/image.hpp"

namespace elsr {

// 10 log10(255^2 / MSE) over all RGB samples, MSE accumulated in f64.
// Identical images give +infinity.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

// Sorted relative paths of every *.png below `root` (recursive).
std::vector<std::filesystem::path> list_png_files(
    const std::filesystem::path& root);

struct FrameScore {
  std::string frame;
  double psnr_db = 0.0;
};

struct EvalReport {
  std::vector<FrameScore> frames;
  double mean_db = 0.0;
};

using Upscaler = std::function<ImageBuffer(const ImageBuffer&)>;

// Upscales every LR frame, quantized to u8, and scores it against the HR
// frame with the same relative path. Frames are reported in path order.
// Throws listing every frame present on only one side.
EvalReport eval_sequence(const Upscaler& upscale,
                         const std::filesystem::path& lr_dir,
                         const std::filesystem::path& hr_dir);

double mean_psnr(const std::vector<FrameScore>& frames);

// "frame,psnr_db" rows then a "mean" row; infinity is written as "inf".
void write_eval_csv(const EvalReport& report, std::ostream& out);
void write_eval_csv(const EvalReport& report,
                    const std::filesystem::path& path);
std::string format_db(double v);

}  // namespace elsr
