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
#include <span>
#include <string>
#include <vector>

#include "elsr/model.hpp"

namespace elsr {

struct ArchiveEntry {
  std::string name;
  std::vector<std::int64_t> dims;
  std::vector<float> data;
};

// Named, shaped parameter collection.
//
// Binary layout (little-endian, no padding):
//   "ELSR" | u32 version=1 | u32 scale | u32 nf | u32 layer_count
//   per layer: u32 name_len | name bytes | u32 ndim | ndim x u32 | f32 data
// Trailing bytes after the last layer are rejected.
struct WeightArchive {
  static constexpr std::uint32_t kVersion = 1;

  std::uint32_t version = kVersion;
  std::uint32_t scale = 0;
  std::uint32_t nf = 0;
  // Not serialized; the binary layout has no field for it.
  std::string init;
  std::vector<ArchiveEntry> entries;

  const ArchiveEntry* find(std::string_view name) const;
  std::int64_t scalar_count() const;
  // Unique names and data lengths matching dims.
  void validate() const;
};

std::vector<std::uint8_t> serialize(const WeightArchive& archive);
// Throws FormatError with the byte offset of the first inconsistency.
WeightArchive deserialize(std::span<const std::uint8_t> bytes);

// Writes to a sibling temp file and renames over `path`.
void write_archive(const WeightArchive& archive,
                   const std::filesystem::path& path);
WeightArchive read_archive(const std::filesystem::path& path);

WeightArchive to_archive(const Model& model);

struct LoadReport {
  std::vector<std::string> loaded_layers;
  std::vector<std::string> skipped_layers;
};

// Builds a model for `config` from archive entries. In strict mode every
// parameter must be present with the exact shape. With allow_partial,
// layers whose parameters are missing or mis-shaped keep their fresh
// initialization (from `init_seed`) and are listed in the report.
Model from_archive(const WeightArchive& archive, const ModelConfig& config,
                   bool allow_partial, std::uint64_t init_seed = 0,
                   LoadReport* report = nullptr);

void save_weights(const Model& model, const std::filesystem::path& path);
Model load_weights(const std::filesystem::path& path, const ModelConfig& config,
                   bool allow_partial, LoadReport* report = nullptr,
                   std::uint64_t init_seed = 0);

// Reconstructs the architecture an archive was saved from. The binary format
// stores scale and nf; the conv count and activation follow from the entry
// names. Activation falls back to `fallback.activation` when no PReLU slope
// is present, and `residual` always comes from `fallback`.
ModelConfig infer_config(const WeightArchive& archive,
                         const ModelConfig& fallback = {});

// x2 -> x4 adaptation: every layer except the tail conv is copied verbatim;
// the tail conv is repeated so that tail output channel co*16 + p*4 + q takes
// x2 channel co*4 + (p/2)*2 + (q/2). Under the pixel_shuffle channel order
// this makes the x4 output the nearest-neighbour x2 upsampling of the x2
// output.
WeightArchive adapt_weights_x2_to_x4(const WeightArchive& x2,
                                     const ModelConfig& target);

}  // namespace elsr
