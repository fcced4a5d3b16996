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
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "elsr/image.hpp"
#include "elsr/model.hpp"
#include "elsr/stage_config.hpp"

namespace elsr {

struct FramePair {
  std::string key;
  ImageBuffer hr;
  ImageBuffer lr;
};

// Loads every HR frame under hr_root with its LR counterpart (same relative
// path) under lr_root; HR dims must be exactly scale x the LR dims.
std::vector<FramePair> load_frame_pairs(const std::filesystem::path& hr_root,
                                        const std::filesystem::path& lr_root,
                                        int scale);

struct PatchPair {
  Tensor lr;  // [N, 3, p / scale, p / scale]
  Tensor hr;  // [N, 3, p, p]
};

// Uniform integer in [0, n) drawn from a 64-bit engine; the mapping is fixed
// so streams match across standard libraries.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

// Aligned random crop: LR window at (x, y) of size p / scale pairs with the
// HR window at (x * scale, y * scale) of size p. Pixels are scaled to [0, 1].
PatchPair sample_patch(const ImageBuffer& hr, const ImageBuffer& lr,
                       int patch_size_hr, int scale, std::mt19937_64& rng,
                       bool hflip = false);

class PatchSampler {
 public:
  PatchSampler(std::vector<FramePair> frames, int scale);

  int scale() const { return scale_; }
  std::size_t frame_count() const { return frames_.size(); }
  void reseed(std::uint64_t seed) { rng_.seed(seed); }
  void set_hflip(bool on) { hflip_ = on; }

  // Patches are drawn in a fixed order from the internal engine, so a
  // given seed always yields the same batch sequence.
  PatchPair next_batch(int batch_size, int patch_size_hr);

 private:
  std::vector<FramePair> frames_;
  int scale_;
  bool hflip_ = false;
  std::mt19937_64 rng_;
};

struct TraceRow {
  std::int64_t iter = 0;  // iterations completed
  float lr = 0.0f;        // learning rate used on the last iteration
  double loss = 0.0;      // mean loss over the logging window
};

struct StageOptions {
  std::int64_t log_every = 100;
  std::function<void(const TraceRow&)> on_log;
};

struct StageResult {
  std::vector<TraceRow> trace;
  double final_loss = 0.0;  // mean loss of the last logging window
};

// Runs `stage.total_iters` Adam steps on `model`, sampling
// `stage.batch_size` patches per step. The sampler is reseeded with `seed`
// first so the run is reproducible bit-for-bit.
StageResult run_stage(Model& model, const TrainStageConfig& stage,
                      PatchSampler& sampler, std::uint64_t seed,
                      const StageOptions& options = {});

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out);
void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::filesystem::path& path);

}  // namespace elsr
