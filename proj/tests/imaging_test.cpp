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

#include <gtest/gtest.h>
#include <png.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "elsr/image.hpp"
#include "elsr/metrics.hpp"
#include "elsr/resize.hpp"
#include "oracles.hpp"

namespace elsr {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("elsr_imaging_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ImageBuffer random_image(int w, int h, std::mt19937_64& rng) {
  ImageBuffer img(w, h);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

// Smooth content so resampling differences stay meaningful.
ImageBuffer gradient_image(int w, int h) {
  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = static_cast<std::uint8_t>((x * 255) / std::max(1, w - 1));
      img.at(x, y, 1) = static_cast<std::uint8_t>((y * 255) / std::max(1, h - 1));
      img.at(x, y, 2) = static_cast<std::uint8_t>(
          127.5 + 127.5 * std::sin(0.3 * x) * std::cos(0.2 * y));
    }
  return img;
}

void write_raw_png(const fs::path& path, int w, int h, png_uint_32 format,
                   const void* pixels) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  ASSERT_TRUE(png_image_write_to_file(&img, path.string().c_str(), 0, pixels, 0,
                                      nullptr))
      << img.message;
}

TEST(Png, RoundTripIsBitExact) {
  const fs::path dir = temp_dir("roundtrip");
  std::mt19937_64 rng(1);
  for (auto [w, h] : {std::pair{1, 1}, std::pair{7, 3}, std::pair{64, 48}}) {
    ImageBuffer img = random_image(w, h, rng);
    write_png(img, dir / "a.png");
    EXPECT_EQ(read_png(dir / "a.png"), img);
    EXPECT_EQ(decode_png(encode_png(img)), img);
  }
}

TEST(Png, SixteenBitIsRejectedClearly) {
  const fs::path dir = temp_dir("sixteen");
  std::vector<std::uint16_t> px(4 * 4 * 3, 1000);
  write_raw_png(dir / "deep.png", 4, 4, PNG_FORMAT_LINEAR_RGB, px.data());
  try {
    read_png(dir / "deep.png");
    FAIL() << "16-bit PNG was accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("16-bit"), std::string::npos);
  }
}

TEST(Png, GrayscaleExpandsToRgb) {
  const fs::path dir = temp_dir("gray");
  std::vector<std::uint8_t> px{0, 50, 200, 255, 17, 128};
  write_raw_png(dir / "g.png", 3, 2, PNG_FORMAT_GRAY, px.data());
  ImageBuffer img = read_png(dir / "g.png");
  ASSERT_EQ(img.width(), 3);
  ASSERT_EQ(img.height(), 2);
  for (int i = 0; i < 6; ++i)
    for (int c = 0; c < 3; ++c) EXPECT_EQ(img.at(i % 3, i / 3, c), px[i]);
}

TEST(Png, GarbageAndMissingFilesError) {
  const fs::path dir = temp_dir("garbage");
  { std::ofstream(dir / "x.png") << "not a png"; }
  EXPECT_THROW(read_png(dir / "x.png"), Error);
  EXPECT_THROW(read_png(dir / "none.png"), Error);
  std::vector<std::uint8_t> junk{1, 2, 3};
  EXPECT_THROW(decode_png(junk), Error);
}

TEST(TensorConversion, ScaleClampAndRound) {
  ImageBuffer img(2, 1, std::vector<std::uint8_t>{255, 0, 128, 1, 2, 3});
  Tensor t = to_tensor(img);
  EXPECT_EQ(t.shape(), (Shape{1, 3, 1, 2}));
  EXPECT_EQ(t.at(0, 0, 0, 0), 1.0f);
  EXPECT_EQ(t.at(0, 2, 0, 0), 128.0f / 255.0f);
  EXPECT_EQ(t.at(0, 0, 0, 1), 1.0f / 255.0f);

  Tensor v(Shape{1, 3, 1, 1}, std::vector<float>{1.7f, -0.2f, 0.5f});
  ImageBuffer out = from_tensor(v);
  EXPECT_EQ(out.at(0, 0, 0), 255);
  EXPECT_EQ(out.at(0, 0, 1), 0);
  EXPECT_EQ(out.at(0, 0, 2), 128);  // 127.5 rounds half away from zero

  Tensor nan(Shape{1, 3, 1, 1}, std::numeric_limits<float>::quiet_NaN());
  EXPECT_EQ(from_tensor(nan).at(0, 0, 0), 0);
  EXPECT_THROW(from_tensor(Tensor(Shape{2, 3, 1, 1})), Error);
}

TEST(TensorConversion, AllLevelsRoundTrip) {
  ImageBuffer img(256, 1);
  for (int x = 0; x < 256; ++x)
    for (int c = 0; c < 3; ++c) img.at(x, 0, c) = static_cast<std::uint8_t>(x);
  EXPECT_EQ(from_tensor(to_tensor(img)), img);
}

TEST(Crop, CopiesWindowAndChecksBounds) {
  std::mt19937_64 rng(2);
  ImageBuffer img = random_image(10, 8, rng);
  ImageBuffer c = crop(img, 3, 2, 4, 5);
  EXPECT_EQ(c.width(), 4);
  EXPECT_EQ(c.height(), 5);
  EXPECT_EQ(c.at(0, 0, 1), img.at(3, 2, 1));
  EXPECT_EQ(c.at(3, 4, 2), img.at(6, 6, 2));
  EXPECT_EQ(crop(img, 0, 0, 10, 8), img);
  EXPECT_THROW(crop(img, 7, 0, 4, 1), Error);
  EXPECT_THROW(crop(img, -1, 0, 1, 1), Error);
}

TEST(Bicubic, KernelValues) {
  EXPECT_EQ(cubic_kernel(0), 1.0);
  EXPECT_EQ(cubic_kernel(1), 0.0);
  EXPECT_EQ(cubic_kernel(2), 0.0);
  EXPECT_DOUBLE_EQ(cubic_kernel(0.5), 0.5625);
  EXPECT_DOUBLE_EQ(cubic_kernel(-1.5), -0.0625);
  for (double x = -3; x <= 3; x += 0.0625) {
    EXPECT_DOUBLE_EQ(cubic_kernel(x), testing::keys_cubic(x));
  }
}

TEST(Bicubic, AxisWeightsAreNormalizedAndInRange) {
  for (auto [in, out] : {std::pair{64, 16}, std::pair{16, 64}, std::pair{9, 4},
                         std::pair{5, 5}, std::pair{1, 3}}) {
    const AxisWeights aw = axis_weights(in, out);
    ASSERT_EQ(aw.indices.size(), static_cast<std::size_t>(out * aw.taps));
    for (int i = 0; i < out; ++i) {
      double sum = 0;
      for (int k = 0; k < aw.taps; ++k) {
        const int idx = aw.indices[static_cast<std::size_t>(i * aw.taps + k)];
        EXPECT_GE(idx, 0);
        EXPECT_LT(idx, in);
        sum += aw.weights[static_cast<std::size_t>(i * aw.taps + k)];
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Bicubic, ConstantImageStaysConstant) {
  ImageBuffer img(13, 9, 77);
  for (auto [w, h] : {std::pair{4, 3}, std::pair{26, 18}, std::pair{7, 20}}) {
    ImageBuffer out = bicubic_resize(img, w, h);
    for (auto v : out.data()) EXPECT_EQ(v, 77);
  }
}

TEST(Bicubic, SameSizeIsIdentity) {
  std::mt19937_64 rng(3);
  ImageBuffer img = random_image(11, 6, rng);
  EXPECT_EQ(bicubic_resize(img, 11, 6), img);
}

TEST(Bicubic, MatchesDirectTwoDimensionalReference) {
  std::mt19937_64 rng(4);
  struct Case { int w, h, ow, oh; };
  for (Case c : {Case{32, 24, 16, 12}, Case{64, 48, 16, 12}, Case{16, 12, 32, 24},
                 Case{10, 10, 25, 7}}) {
    for (const ImageBuffer& img :
         {gradient_image(c.w, c.h), random_image(c.w, c.h, rng)}) {
      ImageBuffer got = bicubic_resize(img, c.ow, c.oh);
      ImageBuffer want = testing::reference_bicubic(img, c.ow, c.oh);
      int worst = 0;
      for (std::size_t i = 0; i < got.data().size(); ++i) {
        worst = std::max(worst, std::abs(int{got.data()[i]} - int{want.data()[i]}));
      }
      EXPECT_LE(worst, 1) << c.w << "x" << c.h << " -> " << c.ow << "x" << c.oh;
    }
  }
}

TEST(Bicubic, HalvingAveragesPairs) {
  // For a 2x downscale of a horizontal ramp, each output is the mean of the
  // two covered inputs (the widened kernel is symmetric about their midpoint).
  ImageBuffer ramp(16, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 16; ++x)
      for (int c = 0; c < 3; ++c) ramp.at(x, y, c) = static_cast<std::uint8_t>(10 * x + 20);
  ImageBuffer out = bicubic_resize(ramp, 8, 2);
  for (int x = 2; x < 6; ++x) EXPECT_EQ(out.at(x, 0, 0), 20 * x + 25);
}

TEST(Bicubic, RejectsEmptyOutput) {
  EXPECT_THROW(bicubic_resize(ImageBuffer(4, 4), 0, 4), Error);
}

TEST(Psnr, KnownValues) {
  std::mt19937_64 rng(5);
  ImageBuffer a = random_image(9, 7, rng);
  EXPECT_TRUE(std::isinf(psnr(a, a)));

  ImageBuffer b = a;
  for (auto& v : b.data()) v = v == 255 ? 254 : v + 1;
  EXPECT_NEAR(psnr(a, b), 20.0 * std::log10(255.0), 1e-9);
  EXPECT_NEAR(psnr(a, b), 48.1308, 1e-4);
  EXPECT_DOUBLE_EQ(psnr(a, b), psnr(b, a));

  EXPECT_DOUBLE_EQ(psnr(ImageBuffer(4, 4, 0), ImageBuffer(4, 4, 255)), 0.0);
  EXPECT_THROW(psnr(ImageBuffer(4, 4), ImageBuffer(4, 5)), Error);
}

TEST(Eval, SequenceReportAndCsv) {
  const fs::path dir = temp_dir("eval");
  std::mt19937_64 rng(6);
  std::vector<double> expected;
  for (int f = 0; f < 3; ++f) {
    const std::string name = "0000000" + std::to_string(f) + ".png";
    ImageBuffer hr = random_image(8, 8, rng);
    ImageBuffer lr = hr;
    for (int i = 0; i <= f; ++i) lr.data()[static_cast<std::size_t>(i)] ^= 0x10;
    fs::create_directories(dir / "lr/seq");
    fs::create_directories(dir / "hr/seq");
    write_png(lr, dir / "lr/seq" / name);
    write_png(hr, dir / "hr/seq" / name);
    expected.push_back(psnr(lr, hr));
  }
  const Upscaler identity = [](const ImageBuffer& i) { return i; };
  EvalReport r = eval_sequence(identity, dir / "lr", dir / "hr");
  ASSERT_EQ(r.frames.size(), 3u);
  EXPECT_EQ(r.frames[0].frame, "seq/00000000.png");
  double sum = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(r.frames[i].psnr_db, expected[i]);
    sum += expected[i];
  }
  EXPECT_NEAR(r.mean_db, sum / 3, 1e-9);

  std::ostringstream csv;
  write_eval_csv(r, csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "frame,psnr_db");
  double csv_sum = 0;
  int rows = 0;
  double csv_mean = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double v = std::stod(line.substr(comma + 1));
    if (line.rfind("mean,", 0) == 0) {
      csv_mean = v;
    } else {
      csv_sum += v;
      ++rows;
    }
  }
  EXPECT_EQ(rows, 3);
  EXPECT_NEAR(csv_mean, csv_sum / rows, 1e-9);

  fs::remove(dir / "hr/seq/00000002.png");
  try {
    eval_sequence(identity, dir / "lr", dir / "hr");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("00000002.png"), std::string::npos);
  }
}

TEST(Eval, InfiniteScoresFormatAsInf) {
  EvalReport r;
  r.frames.push_back({"a.png", std::numeric_limits<double>::infinity()});
  r.mean_db = mean_psnr(r.frames);
  std::ostringstream csv;
  write_eval_csv(r, csv);
  EXPECT_EQ(csv.str(), "frame,psnr_db\na.png,inf\nmean,inf\n");
}

}  // namespace
}  // namespace elsr
