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

// Library side of the `elsr` command-line tool. Each command writes progress
// to `out` (suppressed by quiet), warnings and per-item failures to `err`,
// throws elsr::Error on fatal problems, and returns the process exit code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace elsr {

struct PrepareOptions {
  std::filesystem::path hr_root;
  std::filesystem::path out_root;
  int scale = 4;
  bool quiet = false;
};
int cmd_prepare_data(const PrepareOptions& o, std::ostream& out,
                     std::ostream& err);

struct TrainOptions {
  std::filesystem::path config_path;
  std::filesystem::path data_root;    // dataset root; the train split is used
  std::filesystem::path out_weights;
  int stage = 1;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> iters_override;
  std::optional<int> batch_override;
  std::optional<int> patch_override;
  std::optional<float> lr_override;
  // Weights to start from. Defaults to stage<N-1>.elsr next to out_weights
  // for stages that do not train from scratch.
  std::optional<std::filesystem::path> init_weights;
  std::optional<std::filesystem::path> loss_csv;  // default <out>.loss.csv
  int nf = 6;
  std::int64_t log_every = 100;
  bool quiet = false;
};
int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err);

// Where cmd_train looks for the previous stage when --init is not given.
std::filesystem::path default_init_path(const std::filesystem::path& out_weights,
                                        int stage);

struct AdaptOptions {
  std::filesystem::path x2_weights;
  std::filesystem::path out_weights;
  std::uint64_t seed = 0;
  bool quiet = false;
};
int cmd_adapt(const AdaptOptions& o, std::ostream& out, std::ostream& err);

struct InferOptions {
  std::filesystem::path weights;
  std::filesystem::path input;  // a PNG file or a directory tree of PNGs
  std::filesystem::path out_dir;
  bool baseline = false;        // also write <stem>_bicubic.png
  bool quiet = false;
};
int cmd_infer(const InferOptions& o, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::optional<std::filesystem::path> weights;
  std::string method = "model";  // model | bicubic | identity
  int scale = 4;                 // used by the bicubic method
  std::filesystem::path lr_dir;
  std::filesystem::path hr_dir;
  std::optional<std::filesystem::path> report_csv;
  bool quiet = false;
};
int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err);

struct InfoOptions {
  std::optional<std::filesystem::path> weights;
  int scale = 4;
  int nf = 6;
  int lr_height = 180;
  int lr_width = 320;
};
int cmd_info(const InfoOptions& o, std::ostream& out, std::ostream& err);

}  // namespace elsr
