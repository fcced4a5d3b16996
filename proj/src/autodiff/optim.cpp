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

#include "elsr/optim.hpp"

#include <cmath>
#include <string>

namespace elsr {

void adam_step(std::span<Parameter> params, std::span<const Tensor> grads,
               AdamState& state, float lr) {
  if (params.size() != grads.size()) {
    throw Error("adam_step: " + std::to_string(params.size()) +
                " parameters but " + std::to_string(grads.size()) +
                " gradients");
  }
  if (!state.m_.empty() && state.m_.size() != params.size()) {
    throw Error("adam_step: optimizer state tracks " +
                std::to_string(state.m_.size()) + " parameters, got " +
                std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].shape() != params[i].value.shape()) {
      throw Error("adam_step: gradient shape " + grads[i].shape().str() +
                  " does not match parameter '" + params[i].name + "' " +
                  params[i].value.shape().str());
    }
    for (float g : grads[i].data()) {
      if (!std::isfinite(g)) {
        throw Error("adam_step: non-finite gradient in parameter '" +
                    params[i].name + "'");
      }
    }
    if (!state.m_.empty() && state.m_[i].shape() != params[i].value.shape()) {
      throw Error("adam_step: optimizer state shape mismatch for '" +
                  params[i].name + "'");
    }
  }
  if (state.m_.empty()) {
    for (const Parameter& p : params) {
      state.m_.emplace_back(p.value.shape());
      state.v_.emplace_back(p.value.shape());
    }
  }

  const AdamOptions& o = state.options_;
  ++state.t_;
  const double t = static_cast<double>(state.t_);
  const double bc1 = 1.0 - std::pow(o.beta1, t);
  const double bc2 = 1.0 - std::pow(o.beta2, t);
  const double step = static_cast<double>(lr);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].value.data();
    auto g = grads[i].data();
    auto m = state.m_[i].data();
    auto v = state.v_[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double gk = g[k];
      const double mk = o.beta1 * m[k] + (1.0 - o.beta1) * gk;
      const double vk = o.beta2 * v[k] + (1.0 - o.beta2) * gk * gk;
      m[k] = static_cast<float>(mk);
      v[k] = static_cast<float>(vk);
      const double mhat = mk / bc1;
      const double vhat = vk / bc2;
      p[k] = static_cast<float>(p[k] - step * mhat / (std::sqrt(vhat) + o.eps));
    }
  }
}

}  // namespace elsr
