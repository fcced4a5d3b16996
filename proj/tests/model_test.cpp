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

#include <random>

#include "elsr/model.hpp"
#include "elsr/ops.hpp"
#include "elsr/weights.hpp"
#include "oracles.hpp"

namespace elsr {
namespace {

using testing::random_tensor;

std::vector<std::vector<std::int64_t>> dims_of(const Model& m) {
  std::vector<std::vector<std::int64_t>> out;
  for (const Parameter& p : m.parameters()) out.push_back(p.dims);
  return out;
}

TEST(Model, DefaultLayerShapes) {
  Model m = build_model(ModelConfig{}, 1);
  std::vector<std::string> names;
  for (const Parameter& p : m.parameters()) names.push_back(p.name);
  EXPECT_EQ(names, (std::vector<std::string>{
                       "conv1.weight", "conv1.bias", "act1.slope",
                       "conv2.weight", "conv2.bias", "conv3.weight",
                       "conv3.bias", "conv4.weight", "conv4.bias"}));
  using D = std::vector<std::int64_t>;
  EXPECT_EQ(dims_of(m), (std::vector<D>{D{6, 3, 3, 3}, D{6}, D{6},
                                        D{6, 6, 3, 3}, D{6}, D{6, 6, 3, 3},
                                        D{6}, D{48, 6, 3, 3}, D{48}}));
}

TEST(Model, ScaleTwoWideTail) {
  ModelConfig cfg;
  cfg.scale = 2;
  cfg.nf = 8;
  Model m = build_model(cfg, 1);
  EXPECT_EQ(m.parameter("conv4.weight").dims,
            (std::vector<std::int64_t>{12, 8, 3, 3}));
}

TEST(Model, ParameterCounts) {
  Model x4 = build_model(ModelConfig{}, 0);
  EXPECT_EQ(count_params(x4), 3474);
  EXPECT_EQ(to_archive(x4).scalar_count(), 3474);

  ModelConfig c2;
  c2.scale = 2;
  Model x2 = build_model(c2, 0);
  EXPECT_EQ(count_params(x2), 1494);
  EXPECT_EQ(to_archive(x2).scalar_count(), 1494);
}

TEST(Model, InitIsDeterministicAndBounded) {
  Model a = build_model(ModelConfig{}, 7);
  Model b = build_model(ModelConfig{}, 7);
  Model c = build_model(ModelConfig{}, 8);
  EXPECT_EQ(serialize(to_archive(a)), serialize(to_archive(b)));
  EXPECT_NE(serialize(to_archive(a)), serialize(to_archive(c)));
  EXPECT_EQ(a.init_descriptor(), init_descriptor(7));

  const double bound = std::sqrt(6.0 / 27.0);
  for (float v : a.parameter("conv1.weight").value.data()) {
    EXPECT_LE(std::abs(v), bound);
  }
  for (float v : a.parameter("conv2.bias").value.data()) EXPECT_EQ(v, 0.0f);
  for (float v : a.parameter("act1.slope").value.data()) EXPECT_EQ(v, 0.25f);
}

TEST(Model, ForwardShape) {
  Model m = build_model(ModelConfig{}, 3);
  Tensor out = m.forward(Tensor(Shape{1, 3, 180, 320}, 0.5f));
  EXPECT_EQ(out.shape(), (Shape{1, 3, 720, 1280}));
  EXPECT_THROW(m.forward(Tensor(Shape{1, 4, 8, 8})), Error);
}

TEST(Model, ZeroWeightsWithoutResidualGiveZeros) {
  ModelConfig cfg;
  cfg.residual = false;
  Model m = build_model(cfg, 3);
  for (Parameter& p : m.parameters()) p.value.fill(0.0f);
  std::mt19937_64 rng(1);
  Tensor out = m.forward(random_tensor(Shape{2, 3, 5, 6}, rng));
  for (float v : out.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Model, ForwardMatchesOpComposition) {
  std::mt19937_64 rng(2);
  for (Activation act :
       {Activation::PReLU, Activation::ReLU, Activation::LeakyReLU}) {
    for (bool residual : {true, false}) {
      ModelConfig cfg;
      cfg.activation = act;
      cfg.residual = residual;
      Model m = build_model(cfg, 11);
      Tensor x = random_tensor(Shape{1, 3, 7, 9}, rng, 0.0f, 1.0f);
      auto conv = [&](const Tensor& in, int k) {
        const std::string n = "conv" + std::to_string(k);
        return conv2d_3x3(in, m.parameter(n + ".weight").value,
                          std::span<const float>(
                              m.parameter(n + ".bias").value.data()));
      };
      Tensor head = conv(x, 1);
      Tensor h;
      switch (act) {
        case Activation::PReLU:
          h = prelu(head, std::span<const float>(
                              m.parameter("act1.slope").value.data()));
          break;
        case Activation::ReLU:
          h = relu(head);
          break;
        case Activation::LeakyReLU:
          h = leaky_relu(head, cfg.leaky_slope);
          break;
      }
      h = conv(conv(h, 2), 3);
      if (residual) h = add(h, head);
      Tensor want = pixel_shuffle(conv(h, 4), 4);
      EXPECT_EQ(m.forward(x).vec(), want.vec());
    }
  }
}

TEST(Model, ConfigValidation) {
  ModelConfig cfg;
  cfg.nb_convs = 1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = ModelConfig{};
  cfg.nf = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = ModelConfig{};
  cfg.scale = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = ModelConfig{};
  cfg.nb_convs = 6;
  EXPECT_EQ(count_params(build_model(cfg, 0)), 3474 + 2 * 330);
}

TEST(Flops, SingleConvOnOnePixelPlane) {
  // 3 -> 6 channels, 3x3 kernel, 4x4 output: 2 * 9 * 3 * 6 * 16
  const auto table = flop_table(ModelConfig{}, 4, 4);
  EXPECT_EQ(table.front().layer, "conv1");
  EXPECT_EQ(table.front().flops, 2 * 9 * 3 * 6 * 16);
  EXPECT_EQ(table.front().flops, 5184);
}

TEST(Flops, TableSumsAndScalesLinearly) {
  Model m = build_model(ModelConfig{}, 0);
  std::int64_t sum = 0;
  for (const LayerCost& c : flop_table(m.config(), 180, 320)) sum += c.flops;
  EXPECT_EQ(sum, count_flops(m, 180, 320));
  EXPECT_EQ(count_flops(m, 360, 320), 2 * count_flops(m, 180, 320));
  // MACs per LR pixel from the conv weights alone, doubled.
  std::int64_t macs = 0;
  for (const Parameter& p : m.parameters()) {
    if (p.dims.size() == 4) macs += dims_numel(p.dims);
  }
  EXPECT_EQ(count_flops(m, 1, 1), 2 * macs + 6 + 6);
}

// Adaptation: a x4 model built from x2 weights reproduces the x2 output,
// nearest-upsampled.

TEST(Adaptation, AdaptedModelIsNearestUpsampleOfSource) {
  ModelConfig c2;
  c2.scale = 2;
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Model x2 = build_model(c2, seed);
    // Perturb biases and slopes so nothing is trivially zero.
    for (Parameter& p : x2.parameters()) {
      if (p.dims.size() == 1) p.value = random_tensor(p.value.shape(), rng);
    }
    WeightArchive adapted = adapt_weights_x2_to_x4(to_archive(x2), ModelConfig{});
    Model x4 = from_archive(adapted, ModelConfig{}, false);
    Tensor in = random_tensor(Shape{1, 3, 6, 5}, rng, 0.0f, 1.0f);
    Tensor want = nearest_upsample(x2.forward(in), 2);
    Tensor got = x4.forward(in);
    ASSERT_EQ(got.shape(), want.shape());
    for (std::size_t i = 0; i < got.data().size(); ++i) {
      ASSERT_NEAR(got.data()[i], want.data()[i], 1e-6);
    }
    for (const Parameter& p : x2.parameters()) {
      if (layer_of(p.name) == "conv4") continue;
      EXPECT_EQ(x4.parameter(p.name).value.vec(), p.value.vec()) << p.name;
    }
  }
}

TEST(Adaptation, TailLayout) {
  ModelConfig c2;
  c2.scale = 2;
  Model x2 = build_model(c2, 1);
  Model x4 = from_archive(adapt_weights_x2_to_x4(to_archive(x2), ModelConfig{}),
                          ModelConfig{}, false);
  const Tensor& w2 = x2.parameter("conv4.weight").value;
  const Tensor& w4 = x4.parameter("conv4.weight").value;
  for (int co = 0; co < 3; ++co)
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        for (int ci = 0; ci < 6; ++ci)
          EXPECT_EQ(w4.at(co * 16 + p * 4 + q, ci, 1, 1),
                    w2.at(co * 4 + (p / 2) * 2 + q / 2, ci, 1, 1));
}

TEST(Adaptation, RejectsWrongScales) {
  Model x4 = build_model(ModelConfig{}, 1);
  EXPECT_THROW(adapt_weights_x2_to_x4(to_archive(x4), ModelConfig{}), Error);
  ModelConfig c2;
  c2.scale = 2;
  Model x2 = build_model(c2, 1);
  EXPECT_THROW(adapt_weights_x2_to_x4(to_archive(x2), c2), Error);
  ModelConfig wide;
  wide.nf = 8;
  EXPECT_THROW(adapt_weights_x2_to_x4(to_archive(x2), wide), Error);
}

}  // namespace
}  // namespace elsr
