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
#include <string>
#include <vector>

#include "elsr/tensor.hpp"

namespace elsr {

// A learnable tensor with its archive name and logical dims. Vectors such
// as biases keep dims {C} while `value` stores them as [1, C, 1, 1].
struct Parameter {
  std::string name;
  std::vector<std::int64_t> dims;
  Tensor value;
};

std::int64_t dims_numel(const std::vector<std::int64_t>& dims);
std::string dims_str(const std::vector<std::int64_t>& dims);
// 4-D storage shape for logical dims of rank 1 or 4.
Shape storage_shape(const std::vector<std::int64_t>& dims);

}  // namespace elsr
