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

#include "elsr/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "elsr/metrics.hpp"
#include "elsr/optim.hpp"

namespace elsr {

namespace fs = std::filesystem;

std::vector<FramePair> load_frame_pairs(const fs::path& hr_root,
                                        const fs::path& lr_root, int scale) {
  std::vector<FramePair> out;
  for (const fs::path& rel : list_png_files(hr_root)) {
    const fs::path lr_path = lr_root / rel;
    if (!fs::exists(lr_path)) {
      throw Error("missing LR frame " + lr_path.string() + " for HR frame " +
                  (hr_root / rel).string());
    }
    FramePair fp{rel.generic_string(), read_png(hr_root / rel),
                 read_png(lr_path)};
    if (fp.hr.width() != fp.lr.width() * scale ||
        fp.hr.height() != fp.lr.height() * scale) {
      throw Error("frame " + fp.key + ": HR " + std::to_string(fp.hr.width()) +
                  "x" + std::to_string(fp.hr.height()) + " is not x" +
                  std::to_string(scale) + " of LR " +
                  std::to_string(fp.lr.width()) + "x" +
                  std::to_string(fp.lr.height()));
    }
    out.push_back(std::move(fp));
  }
  if (out.empty()) throw Error("no training frames under " + hr_root.string());
  return out;
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw Error("uniform_index: empty range");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

namespace {

// Writes the crop into batch slot `slot` of a [N, 3, h, w] tensor.
void put_crop(Tensor& dst, std::int64_t slot, const ImageBuffer& img, int x0,
              int y0, int size, bool flip) {
  for (int c = 0; c < 3; ++c) {
    float* plane = dst.plane(slot, c);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const int sx = flip ? x0 + size - 1 - x : x0 + x;
        plane[y * size + x] = static_cast<float>(img.at(sx, y0 + y, c)) / 255.0f;
      }
    }
  }
}

void check_geometry(const ImageBuffer& hr, const ImageBuffer& lr,
                    int patch_size_hr, int scale) {
  if (scale < 1 || patch_size_hr < scale || patch_size_hr % scale != 0) {
    throw Error("patch size " + std::to_string(patch_size_hr) +
                " is not a positive multiple of scale " + std::to_string(scale));
  }
  if (hr.width() != lr.width() * scale || hr.height() != lr.height() * scale) {
    throw Error("sample_patch: HR dims are not scale x LR dims");
  }
  if (patch_size_hr > hr.width() || patch_size_hr > hr.height()) {
    throw Error("sample_patch: patch " + std::to_string(patch_size_hr) +
                " is larger than the " + std::to_string(hr.width()) + "x" +
                std::to_string(hr.height()) + " frame");
  }
}

void draw_into(PatchPair& out, std::int64_t slot, const ImageBuffer& hr,
               const ImageBuffer& lr, int patch_size_hr, int scale,
               std::mt19937_64& rng, bool hflip) {
  check_geometry(hr, lr, patch_size_hr, scale);
  const int lp = patch_size_hr / scale;
  const int x = static_cast<int>(uniform_index(rng, lr.width() - lp + 1));
  const int y = static_cast<int>(uniform_index(rng, lr.height() - lp + 1));
  const bool flip = hflip && uniform_index(rng, 2) == 1;
  put_crop(out.lr, slot, lr, x, y, lp, flip);
  put_crop(out.hr, slot, hr, x * scale, y * scale, patch_size_hr, flip);
}

}  // namespace

PatchPair sample_patch(const ImageBuffer& hr, const ImageBuffer& lr,
                       int patch_size_hr, int scale, std::mt19937_64& rng,
                       bool hflip) {
  check_geometry(hr, lr, patch_size_hr, scale);
  const int lp = patch_size_hr / scale;
  PatchPair out{Tensor(Shape{1, 3, lp, lp}),
                Tensor(Shape{1, 3, patch_size_hr, patch_size_hr})};
  draw_into(out, 0, hr, lr, patch_size_hr, scale, rng, hflip);
  return out;
}

PatchSampler::PatchSampler(std::vector<FramePair> frames, int scale)
    : frames_(std::move(frames)), scale_(scale) {
  if (frames_.empty()) throw Error("patch sampler needs at least one frame");
  for (const FramePair& f : frames_) {
    if (f.hr.width() != f.lr.width() * scale ||
        f.hr.height() != f.lr.height() * scale) {
      throw Error("frame " + f.key + " does not match scale x" +
                  std::to_string(scale));
    }
  }
}

PatchPair PatchSampler::next_batch(int batch_size, int patch_size_hr) {
  if (batch_size < 1) throw Error("batch size must be >= 1");
  if (patch_size_hr % scale_ != 0) {
    throw Error("patch size " + std::to_string(patch_size_hr) +
                " is not divisible by scale " + std::to_string(scale_));
  }
  const int lp = patch_size_hr / scale_;
  PatchPair out{Tensor(Shape{batch_size, 3, lp, lp}),
                Tensor(Shape{batch_size, 3, patch_size_hr, patch_size_hr})};
  for (int b = 0; b < batch_size; ++b) {
    const FramePair& f = frames_[uniform_index(rng_, frames_.size())];
    draw_into(out, b, f.hr, f.lr, patch_size_hr, scale_, rng_, hflip_);
  }
  return out;
}

StageResult run_stage(Model& model, const TrainStageConfig& stage,
                      PatchSampler& sampler, std::uint64_t seed,
                      const StageOptions& options) {
  stage.validate();
  if (model.config().scale != stage.scale) {
    throw Error("stage " + roman_numeral(stage.stage) + " trains x" +
                std::to_string(stage.scale) + " but the model is x" +
                std::to_string(model.config().scale));
  }
  if (sampler.scale() != stage.scale) {
    throw Error("stage " + roman_numeral(stage.stage) + " trains x" +
                std::to_string(stage.scale) + " but the dataset is x" +
                std::to_string(sampler.scale()));
  }
  const std::int64_t log_every = std::max<std::int64_t>(1, options.log_every);

  sampler.reseed(seed);
  sampler.set_hflip(stage.augment_hflip);
  AdamState adam;
  StageResult result;
  std::span<Parameter> params = model.parameters();
  std::vector<Tensor> grads(params.size());
  std::vector<Var> vars(params.size());
  Tape<float> tape;

  double window_sum = 0.0;
  std::int64_t window_n = 0;
  float lr = 0.0f;
  for (std::int64_t it = 0; it < stage.total_iters; ++it) {
    const PatchPair batch =
        sampler.next_batch(stage.batch_size, stage.patch_size_hr);
    tape.clear();
    for (std::size_t i = 0; i < params.size(); ++i) {
      vars[i] = tape.parameter(params[i].value);
    }
    const Var x = tape.constant(batch.lr);
    const Var y = tape.constant(batch.hr);
    const Var pred = record_forward(tape, model.config(), vars, x);
    const Var loss = tape.loss(stage.loss, pred, y);
    const double loss_value = tape.value(loss).data()[0];
    if (!std::isfinite(loss_value)) {
      throw Error("stage " + roman_numeral(stage.stage) +
                  ": non-finite loss at iteration " + std::to_string(it));
    }
    tape.backward(loss);
    for (std::size_t i = 0; i < params.size(); ++i) grads[i] = tape.grad(vars[i]);

    lr = lr_at(stage, it);
    adam_step(params, grads, adam, lr);

    window_sum += loss_value;
    ++window_n;
    if ((it + 1) % log_every == 0 || it + 1 == stage.total_iters) {
      TraceRow row{it + 1, lr, window_sum / static_cast<double>(window_n)};
      result.trace.push_back(row);
      result.final_loss = row.loss;
      if (options.on_log) options.on_log(row);
      window_sum = 0.0;
      window_n = 0;
    }
  }
  return result;
}

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out) {
  out << "iter,lr,loss\n";
  char buf[96];
  for (const TraceRow& r : trace) {
    std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g\n",
                  static_cast<long long>(r.iter), static_cast<double>(r.lr),
                  r.loss);
    out << buf;
  }
}

void write_trace_csv(const std::vector<TraceRow>& trace, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write loss trace " + path.string());
  write_trace_csv(trace, out);
}

}  // namespace elsr
