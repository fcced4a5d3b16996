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

#include "elsr/parameter.hpp"

namespace elsr {

std::int64_t dims_numel(const std::vector<std::int64_t>& dims) {
  std::int64_t n = 1;
  for (std::int64_t d : dims) n *= d;
  return n;
}

std::string dims_str(const std::vector<std::int64_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

Shape storage_shape(const std::vector<std::int64_t>& dims) {
  if (dims.size() == 1) return Shape{1, dims[0], 1, 1};
  if (dims.size() == 4) return Shape{dims[0], dims[1], dims[2], dims[3]};
  throw Error("unsupported parameter rank " + std::to_string(dims.size()) +
              " for dims " + dims_str(dims));
}

}  // namespace elsr
