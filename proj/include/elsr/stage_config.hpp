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
#include <istream>
#include <string>
#include <vector>

#include "elsr/loss.hpp"

namespace elsr {

enum class InitFrom { Scratch, PreviousStage, X2Adapted };

const char* to_string(InitFrom init);
InitFrom parse_init_from(const std::string& text);

// One training stage: loss, sampling geometry, iteration budget and the
// step-decay learning-rate schedule.
struct TrainStageConfig {
  int stage = 1;  // 1..6, printed as I..VI
  int scale = 4;
  LossKind loss = LossKind::L1;
  int batch_size = 64;
  int patch_size_hr = 256;
  std::int64_t total_iters = 0;
  float lr_init = 0.0f;
  std::vector<std::int64_t> lr_milestones;
  float lr_gamma = 0.5f;
  InitFrom init_from = InitFrom::Scratch;
  bool augment_hflip = false;

  // Throws on broken invariants: milestones strictly increasing and below
  // total_iters, gamma in (0, 1], positive sizes.
  void validate() const;
};

std::string roman_numeral(int stage);

// lr_init * gamma^(number of milestones <= iter). Requires
// 0 <= iter < total_iters.
float lr_at(const TrainStageConfig& config, std::int64_t iter);

// Rescales the iteration budget to `iters`, moving every milestone to
// floor(m * iters / total_iters). Milestones that collapse onto an earlier
// one (or onto 0) are dropped to keep the list strictly increasing.
TrainStageConfig with_iterations(const TrainStageConfig& config,
                                 std::int64_t iters);

// Parses the `[stage.N]` key=value format. Errors cite the line number.
std::vector<TrainStageConfig> parse_stage_configs(std::istream& in);
std::vector<TrainStageConfig> load_stage_configs(
    const std::filesystem::path& path);
std::string format_stage_config(const TrainStageConfig& config);

// The six-stage schedule used for the full-scale run.
std::vector<TrainStageConfig> reference_schedule();

}  // namespace elsr
