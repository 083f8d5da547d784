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

#ifndef GDNN_TENSOR_H_
#define GDNN_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gdnn {

// Dense row-major float tensor; the last dimension varies fastest.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> dims);
  Tensor(std::initializer_list<int> dims) : Tensor(std::vector<int>(dims)) {}
  Tensor(std::vector<int> dims, std::vector<float> data);

  const std::vector<int>& dims() const { return dims_; }
  int dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }

  float& operator[](std::size_t i) { return data_[i]; }
  const float& operator[](std::size_t i) const { return data_[i]; }

  // 3-D accessor for [C,H,W] activations.
  float& at(int c, int h, int w) {
    return data_[(static_cast<std::size_t>(c) * dims_[1] + h) * dims_[2] + w];
  }
  const float& at(int c, int h, int w) const {
    return data_[(static_cast<std::size_t>(c) * dims_[1] + h) * dims_[2] + w];
  }

  void Fill(float value);
  bool AllFinite() const;
  bool AllZero() const;

  // Bitwise comparison of dims and payload.
  bool BitEqual(const Tensor& other) const;

  std::string ShapeString() const;

 private:
  std::vector<int> dims_;
  std::vector<float> data_;
};

std::size_t NumElements(const std::vector<int>& dims);

}  // namespace gdnn

#endif  // GDNN_TENSOR_H_
