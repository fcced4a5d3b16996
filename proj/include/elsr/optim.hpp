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
#include <vector>

#include "elsr/parameter.hpp"

namespace elsr {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Per-parameter moment accumulators. Moments start at zero and `t` counts
// completed steps.
class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(AdamOptions options) : options_(options) {}

  const AdamOptions& options() const { return options_; }
  std::int64_t step() const { return t_; }
  const std::vector<Tensor>& first_moments() const { return m_; }
  const std::vector<Tensor>& second_moments() const { return v_; }

 private:
  friend void adam_step(std::span<Parameter>, std::span<const Tensor>,
                        AdamState&, float);

  AdamOptions options_{};
  std::int64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

// One bias-corrected Adam update. Moments are lazily sized on first use.
// Throws (naming the parameter) on a non-finite gradient or a shape mismatch;
// nothing is modified in that case.
void adam_step(std::span<Parameter> params, std::span<const Tensor> grads,
               AdamState& state, float lr);

}  // namespace elsr
