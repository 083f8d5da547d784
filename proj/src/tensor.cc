/* Copyright 2026 The GroupDNN Authors. All Rights Reserved.

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

#include "gdnn/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gdnn/errors.h"

namespace gdnn {

std::size_t NumElements(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("tensor dims must be positive, got " + std::to_string(d));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> dims) : dims_(std::move(dims)), data_(NumElements(dims_), 0.0f) {}

Tensor::Tensor(std::vector<int> dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (NumElements(dims_) != data_.size()) {
    throw DimensionError("tensor payload of " + std::to_string(data_.size()) +
                         " floats does not match shape " + ShapeString());
  }
}

void Tensor::Fill(float value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

bool Tensor::AllZero() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return v == 0.0f; });
}

bool Tensor::BitEqual(const Tensor& other) const {
  return dims_ == other.dims_ && data_.size() == other.data_.size() &&
         (data_.empty() ||
          std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0);
}

std::string Tensor::ShapeString() const {
  std::string s = "[";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims_[i]);
  }
  return s + "]";
}

}  // namespace gdnn
