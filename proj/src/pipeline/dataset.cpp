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

#include "elsr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>

#include "elsr/error.hpp"
#include "elsr/metrics.hpp"
#include "elsr/resize.hpp"

namespace elsr {

namespace fs = std::filesystem;

fs::path DatasetLayout::lr_root(int scale) const {
  if (scale < 1) throw Error("scale must be >= 1, got " + std::to_string(scale));
  if (scale == 1) return hr_root();
  return root / split / ("X" + std::to_string(scale));
}

std::vector<std::string> DatasetLayout::sequences() const {
  std::vector<std::string> out;
  if (!fs::is_directory(hr_root())) {
    throw Error("dataset has no HR directory at " + hr_root().string());
  }
  for (const auto& e : fs::directory_iterator(hr_root())) {
    if (e.is_directory()) out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> DatasetLayout::frames(const std::string& sequence) const {
  std::vector<fs::path> out;
  for (const fs::path& rel : list_png_files(hr_root() / sequence)) {
    out.push_back(hr_root() / sequence / rel);
  }
  return out;
}

std::string DatasetLayout::sequence_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", index);
  return buf;
}

std::string DatasetLayout::frame_name(int index) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%08d.png", index);
  return buf;
}

bool is_known_split(const std::string& split) {
  return split == "train" || split == "val" || split == "test";
}

namespace {

struct Rgb {
  double r, g, b;
};

enum class ShapeKind { Disc, Box, Ring, Stripes };

struct Shape2D {
  ShapeKind kind;
  double cx, cy;  // position at frame 0, pixels
  double vx, vy;  // pixels per frame
  double size;
  double angle;
  Rgb color;

  bool covers(double x, double y, int frame) const {
    const double dx = x - (cx + vx * frame);
    const double dy = y - (cy + vy * frame);
    const double c = std::cos(angle), s = std::sin(angle);
    const double u = c * dx + s * dy;
    const double v = -s * dx + c * dy;
    switch (kind) {
      case ShapeKind::Disc:
        return u * u + v * v <= size * size;
      case ShapeKind::Box:
        return std::abs(u) <= size && std::abs(v) <= 0.6 * size;
      case ShapeKind::Ring: {
        const double r = std::sqrt(u * u + v * v);
        return r <= size && r >= 0.6 * size;
      }
      case ShapeKind::Stripes:
        return std::abs(u) <= size && std::abs(v) <= size &&
               std::fmod(u + 4 * size, 0.5 * size) < 0.25 * size;
    }
    return false;
  }
};

struct Scene {
  Rgb top, bottom;
  std::vector<Shape2D> shapes;
};

Scene make_scene(int sequence, int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull +
                      static_cast<std::uint64_t>(sequence) + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto color = [&] { return Rgb{unit(rng), unit(rng), unit(rng)}; };
  Scene sc;
  sc.top = color();
  sc.bottom = color();
  const int count = 5 + static_cast<int>(rng() % 3);
  const double extent = std::min(width, height);
  for (int i = 0; i < count; ++i) {
    Shape2D s;
    s.kind = static_cast<ShapeKind>(rng() % 4);
    s.cx = unit(rng) * width;
    s.cy = unit(rng) * height;
    s.vx = (unit(rng) - 0.5) * 4.0;
    s.vy = (unit(rng) - 0.5) * 4.0;
    s.size = extent * (0.08 + 0.17 * unit(rng));
    s.angle = unit(rng) * 3.14159265358979;
    s.color = color();
    sc.shapes.push_back(s);
  }
  return sc;
}

}  // namespace

ImageBuffer toy_frame(int sequence, int frame, int width, int height,
                      std::uint64_t seed) {
  if (width < 1 || height < 1) throw Error("toy frame must be non-empty");
  const Scene sc = make_scene(sequence, width, height, seed);
  constexpr int kSub = 4;  // kSub x kSub supersampling per pixel
  ImageBuffer img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc[3] = {0, 0, 0};
      for (int sy = 0; sy < kSub; ++sy) {
        for (int sx = 0; sx < kSub; ++sx) {
          const double px = x + (sx + 0.5) / kSub;
          const double py = y + (sy + 0.5) / kSub;
          const double t = py / height;
          Rgb c{sc.top.r + (sc.bottom.r - sc.top.r) * t,
                sc.top.g + (sc.bottom.g - sc.top.g) * t,
                sc.top.b + (sc.bottom.b - sc.top.b) * t};
          for (const Shape2D& s : sc.shapes) {
            if (s.covers(px, py, frame)) c = s.color;
          }
          acc[0] += c.r;
          acc[1] += c.g;
          acc[2] += c.b;
        }
      }
      for (int ch = 0; ch < 3; ++ch) {
        img.at(x, y, ch) = static_cast<std::uint8_t>(
            std::lround(255.0 * acc[ch] / (kSub * kSub)));
      }
    }
  }
  return img;
}

int generate_toy_dataset(const fs::path& root, const ToyDatasetOptions& o) {
  if (o.sequences < 1 || o.train_frames < 1 || o.val_frames < 0) {
    throw Error("toy dataset needs at least one sequence and training frame");
  }
  int written = 0;
  for (int s = 0; s < o.sequences; ++s) {
    const std::string seq = DatasetLayout::sequence_name(s);
    for (int f = 0; f < o.train_frames + o.val_frames; ++f) {
      const bool train = f < o.train_frames;
      const DatasetLayout layout{root, train ? "train" : "val"};
      const fs::path dir = layout.hr_root() / seq;
      fs::create_directories(dir);
      write_png(toy_frame(s, f, o.width, o.height, o.seed),
                dir / DatasetLayout::frame_name(f));
      ++written;
    }
  }
  return written;
}

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

// Writes via a temp file so an interrupted run never leaves a truncated PNG.
void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, p);
}

}  // namespace

PrepareReport prepare_lr_frames(const fs::path& hr_root, const fs::path& out_root,
                                int scale) {
  if (scale < 1) throw Error("scale must be >= 1, got " + std::to_string(scale));
  PrepareReport report;
  for (const fs::path& rel : list_png_files(hr_root)) {
    const fs::path src = hr_root / rel;
    const fs::path dst = out_root / rel;
    try {
      std::vector<std::uint8_t> bytes;
      if (scale == 1) {
        bytes = read_bytes(src);
      } else {
        const ImageBuffer hr = read_png(src);
        if (hr.width() % scale != 0 || hr.height() % scale != 0) {
          throw Error(std::to_string(hr.width()) + "x" +
                      std::to_string(hr.height()) + " is not divisible by " +
                      std::to_string(scale));
        }
        bytes = encode_png(
            bicubic_resize(hr, hr.width() / scale, hr.height() / scale));
      }
      if (fs::exists(dst) && read_bytes(dst) == bytes) {
        ++report.unchanged;
        continue;
      }
      write_bytes(dst, bytes);
      ++report.written;
    } catch (const Error& e) {
      report.failures.push_back(src.string() + ": " + e.what());
    }
  }
  return report;
}

}  // namespace elsr
