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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elsr/autodiff.hpp"
#include "elsr/parameter.hpp"

namespace elsr {

enum class Activation { PReLU, ReLU, LeakyReLU };

const char* to_string(Activation a);
Activation parse_activation(const std::string& text);

struct ModelConfig {
  int scale = 4;
  int nf = 6;        // intermediate feature channels
  int nb_convs = 4;  // head conv + (nb_convs - 2) body convs + tail conv
  Activation activation = Activation::PReLU;
  float leaky_slope = 0.1f;
  bool residual = true;  // head conv output added to the tail conv input

  int out_channels() const { return 3 * scale * scale; }
  std::string tail_name() const { return "conv" + std::to_string(nb_convs); }
  void validate() const;
};

struct ParamSpec {
  std::string name;
  std::vector<std::int64_t> dims;
};

// Ordered parameter names and dims for a config: per conv "convK.weight"
// then "convK.bias", with "act1.slope" after conv1 when the activation is
// PReLU.
std::vector<ParamSpec> parameter_layout(const ModelConfig& config);

// Name of the layer a parameter belongs to ("conv4.bias" -> "conv4").
std::string layer_of(std::string_view param_name);

class Model {
 public:
  Model(ModelConfig config, std::vector<Parameter> params,
        std::string init_descriptor = {});

  const ModelConfig& config() const { return config_; }
  std::span<Parameter> parameters() { return params_; }
  std::span<const Parameter> parameters() const { return params_; }
  Parameter& parameter(std::string_view name);
  const Parameter& parameter(std::string_view name) const;
  const std::string& init_descriptor() const { return init_; }

  // [N, 3, H, W] in [0, 1] -> [N, 3, H*scale, W*scale].
  Tensor forward(const Tensor& lr) const;

 private:
  ModelConfig config_;
  std::vector<Parameter> params_;
  std::string init_;
};

// He-uniform conv weights (bound sqrt(6 / fan_in)), zero biases, PReLU
// slopes 0.25. Deterministic in `seed`.
Model build_model(const ModelConfig& config, std::uint64_t seed);
std::string init_descriptor(std::uint64_t seed);

// Records the forward pass on a tape. `params` follow parameter_layout().
template <typename T>
Var record_forward(Tape<T>& tape, const ModelConfig& config,
                   std::span<const Var> params, Var input);

std::int64_t count_params(const Model& model);

struct LayerCost {
  std::string layer;
  std::string detail;
  std::int64_t flops = 0;
};

// Per-layer FLOPs for one LR frame of h x w, counting 1 MAC = 2 FLOPs for
// convolutions plus one FLOP per element for the activation and the
// residual add.
std::vector<LayerCost> flop_table(const ModelConfig& config, std::int64_t h,
                                  std::int64_t w);
std::int64_t count_flops(const Model& model, std::int64_t h, std::int64_t w);

}  // namespace elsr
