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

#include "elsr/model.hpp"

#include <cmath>
#include <random>

namespace elsr {

const char* to_string(Activation a) {
  switch (a) {
    case Activation::PReLU:
      return "prelu";
    case Activation::ReLU:
      return "relu";
    case Activation::LeakyReLU:
      return "leaky_relu";
  }
  return "?";
}

Activation parse_activation(const std::string& text) {
  if (text == "prelu") return Activation::PReLU;
  if (text == "relu") return Activation::ReLU;
  if (text == "leaky_relu" || text == "leaky") return Activation::LeakyReLU;
  throw Error("unknown activation '" + text +
              "' (expected prelu, relu or leaky_relu)");
}

void ModelConfig::validate() const {
  if (scale != 2 && scale != 4) {
    throw Error("model scale must be 2 or 4, got " + std::to_string(scale));
  }
  if (nf < 1) {
    throw Error("model nf must be >= 1, got " + std::to_string(nf));
  }
  if (nb_convs < 2) {
    throw Error("model needs at least 2 convs (head and tail), got " +
                std::to_string(nb_convs));
  }
}

std::vector<ParamSpec> parameter_layout(const ModelConfig& config) {
  config.validate();
  std::vector<ParamSpec> out;
  const std::int64_t nf = config.nf;
  for (int k = 1; k <= config.nb_convs; ++k) {
    const std::int64_t cin = k == 1 ? 3 : nf;
    const std::int64_t cout = k == config.nb_convs ? config.out_channels() : nf;
    const std::string base = "conv" + std::to_string(k);
    out.push_back({base + ".weight", {cout, cin, 3, 3}});
    out.push_back({base + ".bias", {cout}});
    if (k == 1 && config.activation == Activation::PReLU) {
      out.push_back({"act1.slope", {nf}});
    }
  }
  return out;
}

std::string layer_of(std::string_view param_name) {
  const auto dot = param_name.find('.');
  return std::string(param_name.substr(0, dot));
}

Model::Model(ModelConfig config, std::vector<Parameter> params,
             std::string init_descriptor)
    : config_(config), params_(std::move(params)), init_(std::move(init_descriptor)) {
  const auto layout = parameter_layout(config_);
  if (layout.size() != params_.size()) {
    throw Error("model expects " + std::to_string(layout.size()) +
                " parameters, got " + std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Parameter& p = params_[i];
    if (p.name != layout[i].name || p.dims != layout[i].dims ||
        p.value.shape() != storage_shape(layout[i].dims)) {
      throw Error("parameter " + std::to_string(i) + " is '" + p.name + "' " +
                  dims_str(p.dims) + ", expected '" + layout[i].name + "' " +
                  dims_str(layout[i].dims));
    }
  }
}

Parameter& Model::parameter(std::string_view name) {
  for (Parameter& p : params_) {
    if (p.name == name) return p;
  }
  throw Error("model has no parameter '" + std::string(name) + "'");
}

const Parameter& Model::parameter(std::string_view name) const {
  for (const Parameter& p : params_) {
    if (p.name == name) return p;
  }
  throw Error("model has no parameter '" + std::string(name) + "'");
}

Tensor Model::forward(const Tensor& lr) const {
  const Shape& s = lr.shape();
  if (s.c != 3) {
    throw Error("forward: expected 3 input channels, got " +
                std::to_string(s.c));
  }
  std::size_t i = 0;
  auto next_conv = [&](const Tensor& x) {
    const Tensor& w = params_[i++].value;
    const Tensor& b = params_[i++].value;
    return conv2d_3x3(x, w, b.data());
  };

  const Tensor head = next_conv(lr);
  Tensor h;
  switch (config_.activation) {
    case Activation::PReLU:
      h = prelu(head, params_[i++].value.data());
      break;
    case Activation::ReLU:
      h = relu(head);
      break;
    case Activation::LeakyReLU:
      h = leaky_relu(head, config_.leaky_slope);
      break;
  }
  for (int k = 2; k < config_.nb_convs; ++k) h = next_conv(h);
  if (config_.residual) h = add(h, head);
  return pixel_shuffle(next_conv(h), config_.scale);
}

std::string init_descriptor(std::uint64_t seed) {
  return "he_uniform_fan_in;bias=0;prelu=0.25;seed=" + std::to_string(seed);
}

Model build_model(const ModelConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Fixed-point conversion keeps the stream identical across standard
  // libraries, unlike uniform_real_distribution.
  auto uniform = [&rng](double bound) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return static_cast<float>((2.0 * u - 1.0) * bound);
  };

  std::vector<Parameter> params;
  for (const ParamSpec& spec : parameter_layout(config)) {
    Parameter p{spec.name, spec.dims, Tensor(storage_shape(spec.dims))};
    if (spec.name.ends_with(".weight")) {
      const double fan_in = static_cast<double>(spec.dims[1] * 9);
      const double bound = std::sqrt(6.0 / fan_in);
      for (float& v : p.value.data()) v = uniform(bound);
    } else if (spec.name.ends_with(".slope")) {
      p.value.fill(0.25f);
    }
    params.push_back(std::move(p));
  }
  return Model(config, std::move(params), init_descriptor(seed));
}

template <typename T>
Var record_forward(Tape<T>& tape, const ModelConfig& config,
                   std::span<const Var> params, Var input) {
  const std::size_t expected = parameter_layout(config).size();
  if (params.size() != expected) {
    throw Error("record_forward: expected " + std::to_string(expected) +
                " parameter variables, got " + std::to_string(params.size()));
  }
  std::size_t i = 0;
  auto next_conv = [&](Var x) {
    const Var w = params[i++];
    const Var b = params[i++];
    return tape.conv2d_3x3(x, w, b);
  };

  const Var head = next_conv(input);
  Var h;
  switch (config.activation) {
    case Activation::PReLU:
      h = tape.prelu(head, params[i++]);
      break;
    case Activation::ReLU:
      h = tape.relu(head);
      break;
    case Activation::LeakyReLU:
      h = tape.leaky_relu(head, static_cast<T>(config.leaky_slope));
      break;
  }
  for (int k = 2; k < config.nb_convs; ++k) h = next_conv(h);
  if (config.residual) h = tape.add(h, head);
  return tape.pixel_shuffle(next_conv(h), config.scale);
}

template Var record_forward(Tape<float>&, const ModelConfig&,
                            std::span<const Var>, Var);
template Var record_forward(Tape<double>&, const ModelConfig&,
                            std::span<const Var>, Var);

std::int64_t count_params(const Model& model) {
  std::int64_t total = 0;
  for (const ParamSpec& spec : parameter_layout(model.config())) {
    total += dims_numel(spec.dims);
  }
  return total;
}

std::vector<LayerCost> flop_table(const ModelConfig& config, std::int64_t h,
                                  std::int64_t w) {
  config.validate();
  if (h < 1 || w < 1) throw Error("flop_table: frame size must be >= 1");
  const std::int64_t px = h * w;
  const std::int64_t nf = config.nf;
  std::vector<LayerCost> out;
  for (int k = 1; k <= config.nb_convs; ++k) {
    const std::int64_t cin = k == 1 ? 3 : nf;
    const std::int64_t cout = k == config.nb_convs ? config.out_channels() : nf;
    out.push_back({"conv" + std::to_string(k),
                   "3x3 " + std::to_string(cin) + "->" + std::to_string(cout),
                   2 * 9 * cin * cout * px});
    if (k == 1) {
      out.push_back({"act1", to_string(config.activation), px * nf});
    }
    if (k == config.nb_convs - 1 && config.residual) {
      out.push_back({"residual", "add conv1 -> conv" +
                                     std::to_string(config.nb_convs) + " input",
                     px * nf});
    }
  }
  out.push_back({"pixel_shuffle", "x" + std::to_string(config.scale), 0});
  return out;
}

std::int64_t count_flops(const Model& model, std::int64_t h, std::int64_t w) {
  std::int64_t total = 0;
  for (const LayerCost& c : flop_table(model.config(), h, w)) total += c.flops;
  return total;
}

}  // namespace elsr
