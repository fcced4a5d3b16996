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
#include <filesystem>
#include <span>
#include <vector>

#include "elsr/tensor.hpp"

namespace elsr {

// 8-bit interleaved RGB, row-major. data.size() == width * height * 3.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, std::uint8_t fill = 0);
  ImageBuffer(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }
  const std::vector<std::uint8_t>& vec() const { return data_; }

  std::uint8_t& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }

  bool operator==(const ImageBuffer&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Reads 8-bit PNGs; grayscale and palette images are expanded to RGB, alpha
// is dropped. 16-bit images are rejected.
ImageBuffer read_png(const std::filesystem::path& path);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);
void write_png(const ImageBuffer& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const ImageBuffer& image);

// u8 -> f32 / 255 as a [1, 3, H, W] tensor.
Tensor to_tensor(const ImageBuffer& image);
// Requires N == 1 and C == 3. Values are clamped to [0, 1], scaled by 255
// and rounded half away from zero.
ImageBuffer from_tensor(const Tensor& t);

// Crop of `w` x `h` pixels with top-left corner (x, y).
ImageBuffer crop(const ImageBuffer& image, int x, int y, int w, int h);

}  // namespace elsr
