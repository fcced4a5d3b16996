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

#include "elsr/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace elsr {

ImageBuffer::ImageBuffer(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error("image dimensions must be >= 0");
  data_.assign(static_cast<std::size_t>(width) * height * 3, fill);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0) throw Error("image dimensions must be >= 0");
  if (data_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error("image data length " + std::to_string(data_.size()) +
                " does not match " + std::to_string(width) + "x" +
                std::to_string(height) + "x3");
  }
}

namespace {

// png_image owns libpng state until png_image_free.
struct PngImage {
  png_image img;
  PngImage() {
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&img); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

ImageBuffer finish_read(PngImage& png, const std::string& source) {
  if (png.img.format & PNG_FORMAT_FLAG_LINEAR) {
    throw Error(source + ": unsupported PNG format (16-bit channels); only "
                "8-bit images are accepted");
  }
  png.img.format = PNG_FORMAT_RGB;
  const int w = static_cast<int>(png.img.width);
  const int h = static_cast<int>(png.img.height);
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png.img));
  if (!png_image_finish_read(&png.img, nullptr, pixels.data(), 0, nullptr)) {
    throw Error(source + ": PNG decode failed: " + png.img.message);
  }
  return ImageBuffer(w, h, std::move(pixels));
}

}  // namespace

ImageBuffer read_png(const std::filesystem::path& path) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.img, path.string().c_str())) {
    throw Error(path.string() + ": cannot read PNG: " + png.img.message);
  }
  return finish_read(png, path.string());
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
  PngImage png;
  if (!png_image_begin_read_from_memory(&png.img, bytes.data(), bytes.size())) {
    throw Error(std::string("cannot decode PNG: ") + png.img.message);
  }
  return finish_read(png, "<memory>");
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& image) {
  if (image.width() < 1 || image.height() < 1) {
    throw Error("cannot encode an empty image");
  }
  PngImage png;
  png.img.width = static_cast<png_uint_32>(image.width());
  png.img.height = static_cast<png_uint_32>(image.height());
  png.img.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png.img, size, 0, image.data().data(),
                                       0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + png.img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png.img, out.data(), &size, 0,
                                 image.data().data(), 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + png.img.message);
  }
  out.resize(size);
  return out;
}

void write_png(const ImageBuffer& image, const std::filesystem::path& path) {
  if (image.width() < 1 || image.height() < 1) {
    throw Error("cannot write an empty image to " + path.string());
  }
  PngImage png;
  png.img.width = static_cast<png_uint_32>(image.width());
  png.img.height = static_cast<png_uint_32>(image.height());
  png.img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png.img, path.string().c_str(), 0,
                               image.data().data(), 0, nullptr)) {
    throw Error(path.string() + ": PNG write failed: " + png.img.message);
  }
}

Tensor to_tensor(const ImageBuffer& image) {
  const int w = image.width();
  const int h = image.height();
  Tensor t(Shape{1, 3, h, w});
  for (int c = 0; c < 3; ++c) {
    float* dst = t.plane(0, c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        dst[y * w + x] = static_cast<float>(image.at(x, y, c)) / 255.0f;
      }
    }
  }
  return t;
}

ImageBuffer from_tensor(const Tensor& t) {
  const Shape& s = t.shape();
  if (s.n != 1 || s.c != 3) {
    throw Error("from_tensor: expected shape [1,3,H,W], got " + s.str());
  }
  const int w = static_cast<int>(s.w);
  const int h = static_cast<int>(s.h);
  ImageBuffer img(w, h);
  for (int c = 0; c < 3; ++c) {
    const float* src = t.plane(0, c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double v = src[y * w + x];
        v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        img.at(x, y, c) = static_cast<std::uint8_t>(std::round(v * 255.0));
      }
    }
  }
  return img;
}

ImageBuffer crop(const ImageBuffer& image, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 0 || h < 0 || x + w > image.width() ||
      y + h > image.height()) {
    throw Error("crop window " + std::to_string(w) + "x" + std::to_string(h) +
                "+" + std::to_string(x) + "+" + std::to_string(y) +
                " exceeds image " + std::to_string(image.width()) + "x" +
                std::to_string(image.height()));
  }
  ImageBuffer out(w, h);
  if (w == 0) return out;
  for (int row = 0; row < h; ++row) {
    const std::uint8_t* src = &image.data()[(static_cast<std::size_t>(y + row) *
                                                 image.width() + x) * 3];
    std::copy_n(src, static_cast<std::size_t>(w) * 3, &out.at(0, row, 0));
  }
  return out;
}

}  // namespace elsr
