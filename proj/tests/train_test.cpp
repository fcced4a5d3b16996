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

#include <filesystem>
#include <sstream>

#include "elsr/dataset.hpp"
#include "elsr/resize.hpp"
#include "elsr/train.hpp"
#include "elsr/weights.hpp"
#include "oracles.hpp"

namespace elsr {
namespace {

FramePair toy_pair(int w, int h, int scale, int frame = 0) {
  ImageBuffer hr = toy_frame(0, frame, w, h, 3);
  ImageBuffer lr = bicubic_resize(hr, w / scale, h / scale);
  return FramePair{"000/" + DatasetLayout::frame_name(frame), hr, lr};
}

TrainStageConfig tiny_stage(int scale, std::int64_t iters, int patch,
                            int batch, float lr, LossKind loss) {
  TrainStageConfig s = reference_schedule()[0];
  s.scale = scale;
  s.total_iters = iters;
  s.patch_size_hr = patch;
  s.batch_size = batch;
  s.lr_init = lr;
  s.lr_milestones.clear();
  s.loss = loss;
  return s;
}

TEST(SamplePatch, FullFrameCropIsTheWholeImage) {
  FramePair fp = toy_pair(32, 32, 4);
  std::mt19937_64 rng(1);
  PatchPair p = sample_patch(fp.hr, fp.lr, 32, 4, rng);
  EXPECT_EQ(p.hr.shape(), (Shape{1, 3, 32, 32}));
  EXPECT_EQ(p.lr.shape(), (Shape{1, 3, 8, 8}));
  EXPECT_EQ(from_tensor(p.hr), fp.hr);
  EXPECT_EQ(from_tensor(p.lr), fp.lr);
}

TEST(SamplePatch, CropsStayAligned) {
  // Encode coordinates in the pixels so the crop origin can be read back.
  ImageBuffer hr(64, 48), lr(16, 12);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      hr.at(x, y, 0) = static_cast<std::uint8_t>(x);
      hr.at(x, y, 1) = static_cast<std::uint8_t>(y);
    }
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x) {
      lr.at(x, y, 0) = static_cast<std::uint8_t>(x);
      lr.at(x, y, 1) = static_cast<std::uint8_t>(y);
    }
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    for (bool flip : {false, true}) {
      PatchPair p = sample_patch(hr, lr, 16, 4, rng, flip);
      ImageBuffer h = from_tensor(p.hr);
      ImageBuffer l = from_tensor(p.lr);
      const bool flipped = l.at(0, 0, 0) > l.at(3, 0, 0);
      EXPECT_TRUE(flip || !flipped);
      const int lx = flipped ? l.at(3, 0, 0) : l.at(0, 0, 0);
      const int hx = flipped ? h.at(15, 0, 0) : h.at(0, 0, 0);
      EXPECT_EQ(hx, lx * 4);
      EXPECT_EQ(h.at(0, 0, 1), l.at(0, 0, 1) * 4);
    }
  }
}

TEST(SamplePatch, DeterministicAndValidated) {
  FramePair fp = toy_pair(64, 64, 2);
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(sample_patch(fp.hr, fp.lr, 16, 2, a).hr.vec(),
              sample_patch(fp.hr, fp.lr, 16, 2, b).hr.vec());
  }
  EXPECT_THROW(sample_patch(fp.hr, fp.lr, 15, 2, a), Error);
  EXPECT_THROW(sample_patch(fp.hr, fp.lr, 128, 2, a), Error);
  EXPECT_THROW(sample_patch(fp.hr, fp.lr, 16, 4, a), Error);
}

TEST(UniformIndex, StaysInRange) {
  std::mt19937_64 rng(4);
  std::vector<int> hits(7);
  for (int i = 0; i < 7000; ++i) ++hits[uniform_index(rng, 7)];
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(uniform_index(rng, 1), 0u);
}

TEST(RunStage, ZeroIterationsLeavesModelUnchanged) {
  PatchSampler sampler({toy_pair(32, 32, 4)}, 4);
  Model m = build_model(ModelConfig{}, 5);
  const auto before = serialize(to_archive(m));
  StageResult r = run_stage(m, tiny_stage(4, 0, 32, 1, 1e-3f, LossKind::L1),
                            sampler, 1);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(serialize(to_archive(m)), before);
}

TEST(RunStage, RejectsScaleMismatch) {
  PatchSampler sampler({toy_pair(32, 32, 4)}, 4);
  ModelConfig c2;
  c2.scale = 2;
  Model m = build_model(c2, 5);
  EXPECT_THROW(run_stage(m, tiny_stage(4, 1, 32, 1, 1e-3f, LossKind::L1),
                         sampler, 1),
               Error);
  Model m4 = build_model(ModelConfig{}, 5);
  EXPECT_THROW(run_stage(m4, tiny_stage(4, 1, 30, 1, 1e-3f, LossKind::L1),
                         sampler, 1),
               Error);
}

TEST(RunStage, SameSeedSameBytes) {
  std::vector<FramePair> frames{toy_pair(64, 48, 4, 0), toy_pair(64, 48, 4, 1)};
  auto run = [&](std::uint64_t seed) {
    PatchSampler sampler(frames, 4);
    Model m = build_model(ModelConfig{}, seed);
    TrainStageConfig s = tiny_stage(4, 30, 32, 2, 1e-3f, LossKind::MSE);
    s.lr_milestones = {20};
    s.augment_hflip = true;
    StageOptions o;
    o.log_every = 10;
    StageResult r = run_stage(m, s, sampler, seed, o);
    std::ostringstream csv;
    write_trace_csv(r.trace, csv);
    return std::pair{serialize(to_archive(m)), csv.str()};
  };
  const auto a = run(7), b = run(7), c = run(8);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  EXPECT_NE(a.first, c.first);
  EXPECT_EQ(a.second.substr(0, a.second.find('\n')), "iter,lr,loss");
}

TEST(RunStage, TraceRowsFollowSchedule) {
  PatchSampler sampler({toy_pair(32, 32, 4)}, 4);
  Model m = build_model(ModelConfig{}, 1);
  TrainStageConfig s = tiny_stage(4, 25, 32, 1, 1e-3f, LossKind::L1);
  s.lr_milestones = {10};
  StageOptions o;
  o.log_every = 10;
  StageResult r = run_stage(m, s, sampler, 1, o);
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[0].iter, 10);
  EXPECT_EQ(r.trace[0].lr, 1e-3f);
  EXPECT_EQ(r.trace[1].lr, 5e-4f);
  EXPECT_EQ(r.trace[2].iter, 25);
  EXPECT_EQ(r.final_loss, r.trace.back().loss);
}

// Smoke test of the optimisation loop on one fixed 64-px patch: full-batch
// Adam must cut the loss by two orders of magnitude.
TEST(RunStage, LossFallsOnSinglePatch) {
  ImageBuffer hr(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      hr.at(x, y, 0) = static_cast<std::uint8_t>(50 + 2 * x);
      hr.at(x, y, 1) = static_cast<std::uint8_t>(80 + y);
      hr.at(x, y, 2) = 128;
    }
  PatchSampler sampler({FramePair{"p", hr, bicubic_resize(hr, 16, 16)}}, 4);
  Model m = build_model(ModelConfig{}, 1);
  PatchPair p = sampler.next_batch(1, 64);
  const double before = mse_loss(m.forward(p.lr), p.hr);
  run_stage(m, tiny_stage(4, 2000, 64, 1, 1e-3f, LossKind::MSE), sampler, 1);
  const double after = mse_loss(m.forward(p.lr), p.hr);
  EXPECT_LT(after, before / 100) << before << " -> " << after;
}

}  // namespace
}  // namespace elsr
