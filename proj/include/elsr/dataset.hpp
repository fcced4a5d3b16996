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
#include <string>
#include <vector>

#include "elsr/image.hpp"

namespace elsr {

// REDS-style tree:
//   <root>/<split>/HR/<sequence>/<frame>.png
//   <root>/<split>/X<scale>/<sequence>/<frame>.png
// Sequences are zero-padded to 3 digits and frames to 8 ("000/00000000.png").
struct DatasetLayout {
  std::filesystem::path root;
  std::string split = "train";

  std::filesystem::path hr_root() const { return root / split / "HR"; }
  std::filesystem::path lr_root(int scale) const;

  std::vector<std::string> sequences() const;
  std::vector<std::filesystem::path> frames(const std::string& sequence) const;

  static std::string sequence_name(int index);
  static std::string frame_name(int index);
};

bool is_known_split(const std::string& split);

// Synthetic moving-shapes footage used for desk-scale experiments.
struct ToyDatasetOptions {
  int sequences = 5;
  int train_frames = 8;  // per sequence, frames [0, train_frames)
  int val_frames = 2;    // held-out frames that follow the training ones
  int width = 128;
  int height = 96;
  std::uint64_t seed = 0;
};

ImageBuffer toy_frame(int sequence, int frame, int width, int height,
                      std::uint64_t seed);

// Writes HR frames for the train and val splits. Returns frames written.
int generate_toy_dataset(const std::filesystem::path& root,
                         const ToyDatasetOptions& options);

struct PrepareReport {
  int written = 0;
  int unchanged = 0;
  std::vector<std::string> failures;  // one message per failed frame
};

// Bicubic-downscales every HR frame under hr_root into the same relative
// path under out_root. Frames whose encoded output already matches on disk
// are left alone. Scale 1 copies the source bytes.
PrepareReport prepare_lr_frames(const std::filesystem::path& hr_root,
                                const std::filesystem::path& out_root,
                                int scale);

}  // namespace elsr
