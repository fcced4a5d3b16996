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

#include "elsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

namespace elsr {

namespace fs = std::filesystem;

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error("psnr: dimension mismatch " + std::to_string(a.width()) + "x" +
                std::to_string(a.height()) + " vs " +
                std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
  auto x = a.data();
  auto y = b.data();
  if (x.empty()) throw Error("psnr: empty images");
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(x.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<fs::path> list_png_files(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error("not a directory: " + root.string());
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") out.push_back(fs::relative(entry.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double mean_psnr(const std::vector<FrameScore>& frames) {
  if (frames.empty()) return 0.0;
  double sum = 0.0;
  for (const FrameScore& f : frames) sum += f.psnr_db;
  return sum / static_cast<double>(frames.size());
}

EvalReport eval_sequence(const Upscaler& upscale, const fs::path& lr_dir,
                         const fs::path& hr_dir) {
  const auto lr = list_png_files(lr_dir);
  const auto hr = list_png_files(hr_dir);
  const std::set<fs::path> lr_set(lr.begin(), lr.end());
  const std::set<fs::path> hr_set(hr.begin(), hr.end());
  std::string missing;
  for (const fs::path& p : lr) {
    if (!hr_set.count(p)) missing += "\n  no HR frame for " + p.generic_string();
  }
  for (const fs::path& p : hr) {
    if (!lr_set.count(p)) missing += "\n  no LR frame for " + p.generic_string();
  }
  if (!missing.empty()) throw Error("eval: unmatched frames:" + missing);
  if (lr.empty()) throw Error("eval: no PNG frames under " + lr_dir.string());

  EvalReport report;
  for (const fs::path& rel : lr) {
    const ImageBuffer out = upscale(read_png(lr_dir / rel));
    const ImageBuffer ref = read_png(hr_dir / rel);
    if (out.width() != ref.width() || out.height() != ref.height()) {
      throw Error("eval: frame " + rel.generic_string() + " upscales to " +
                  std::to_string(out.width()) + "x" +
                  std::to_string(out.height()) + " but HR is " +
                  std::to_string(ref.width()) + "x" +
                  std::to_string(ref.height()));
    }
    report.frames.push_back({rel.generic_string(), psnr(out, ref)});
  }
  report.mean_db = mean_psnr(report.frames);
  return report;
}

std::string format_db(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_eval_csv(const EvalReport& report, std::ostream& out) {
  out << "frame,psnr_db\n";
  for (const FrameScore& f : report.frames) {
    out << f.frame << "," << format_db(f.psnr_db) << "\n";
  }
  out << "mean," << format_db(report.mean_db) << "\n";
}

void write_eval_csv(const EvalReport& report, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write eval report " + path.string());
  write_eval_csv(report, out);
}

}  // namespace elsr
