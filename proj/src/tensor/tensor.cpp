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

#include "elsr/tensor.hpp"

#include <algorithm>

namespace elsr {

std::string Shape::str() const {
  return "[" + std::to_string(n) + "," + std::to_string(c) + "," +
         std::to_string(h) + "," + std::to_string(w) + "]";
}

namespace {

void check_extents(const Shape& s) {
  if (s.n < 0 || s.c < 0 || s.h < 0 || s.w < 0) {
    throw Error("tensor shape " + s.str() + " has a negative extent");
  }
}

}  // namespace

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, T fill) : shape_(shape) {
  check_extents(shape);
  data_.assign(static_cast<std::size_t>(shape.numel()), fill);
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> data)
    : shape_(shape), data_(std::move(data)) {
  check_extents(shape);
  if (static_cast<std::int64_t>(data_.size()) != shape.numel()) {
    throw Error("tensor data length " + std::to_string(data_.size()) +
                " does not match shape " + shape.str());
  }
}

template <typename T>
void BasicTensor<T>::fill(T v) {
  std::fill(data_.begin(), data_.end(), v);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::reshaped(Shape shape) const {
  if (shape.numel() != numel()) {
    throw Error("cannot reshape " + shape_.str() + " to " + shape.str());
  }
  return BasicTensor<T>(shape, data_);
}

template class BasicTensor<float>;
template class BasicTensor<double>;

}  // namespace elsr
