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

#ifndef GDNN_LAYERS_H_
#define GDNN_LAYERS_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gdnn/tensor.h"

// Forward and backward kernels for the layer types of the grouped AlexNet.
// Every forward is pure; when a context pointer is supplied it records what
// the matching backward needs. Contexts are per call, so concurrent calls on
// disjoint data are safe.
namespace gdnn {

struct ConvSpec {
  int kernel = 3;
  int stride = 1;
  int pad = 0;
  int in_channels = 1;
  int out_channels = 1;

  // Throws ConfigError for kernel/stride/pad out of range.
  void Validate() const;
  // Output extent along one spatial axis; throws DimensionError when < 1.
  int OutputExtent(int input_extent) const;
};

struct LrnSpec {
  int local_size = 5;
  float alpha = 1e-4f;
  float beta = 0.75f;
  float k = 1.0f;

  // local_size must be odd and positive. alpha may be zero (the identity
  // normalizer) at kernel level; architectures require it to be positive.
  void Validate() const;

  bool operator==(const LrnSpec&) const = default;
};

struct PoolSpec {
  int kernel = 2;
  int stride = 2;

  void Validate() const;
  int OutputExtent(int input_extent) const;
};

// ---- convolution -----------------------------------------------------------

struct ConvContext {
  bool ready = false;
  ConvSpec spec;
  int in_h = 0, in_w = 0, out_h = 0, out_w = 0;
  Tensor padded;  // zero-padded input [C_in, H+2p, W+2p]
};

struct ConvGrads {
  Tensor input;    // empty when not requested
  Tensor weights;  // [C_out, C_in, K, K]
  Tensor bias;     // [C_out]
};

// Direct cross-correlation. Each output element is accumulated as
// bias + sum over (c_in, kh, kw) in ascending order, zero padding included.
Tensor Conv2dForward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                     const ConvSpec& spec, ConvContext* ctx = nullptr,
                     std::string_view layer = "conv");

ConvGrads Conv2dBackward(const ConvContext& ctx, const Tensor& weights, const Tensor& grad_out,
                         bool want_input_grad = true);

// ---- relu ------------------------------------------------------------------

struct ReluContext {
  bool ready = false;
  Tensor output;
};

Tensor ReluForward(const Tensor& input, ReluContext* ctx = nullptr);
// Gradient is zero wherever the forward output was not positive.
Tensor ReluBackward(const ReluContext& ctx, const Tensor& grad_out);

// ---- local response normalization (across channels) -----------------------

struct LrnContext {
  bool ready = false;
  LrnSpec spec;
  Tensor input;
  Tensor scale;  // k + alpha/n * window sum of squares
};

Tensor LrnForward(const Tensor& input, const LrnSpec& spec, LrnContext* ctx = nullptr);
Tensor LrnBackward(const LrnContext& ctx, const Tensor& grad_out);

// ---- max pooling -----------------------------------------------------------

struct MaxPoolContext {
  bool ready = false;
  std::vector<int> input_dims;
  // Flat input index of the winner for every output element. Ties go to the
  // lowest flat index.
  std::vector<std::int32_t> argmax;
};

Tensor MaxPoolForward(const Tensor& input, const PoolSpec& spec, MaxPoolContext* ctx = nullptr,
                      std::string_view layer = "pool");
Tensor MaxPoolBackward(const MaxPoolContext& ctx, const Tensor& grad_out);

// ---- fully connected -------------------------------------------------------

struct FcContext {
  bool ready = false;
  Tensor input;
};

struct FcGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};

// out[o] = bias[o] + sum_d weights[o,d] * input[d], d ascending.
Tensor FcForward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                 FcContext* ctx = nullptr);
FcGrads FcBackward(const FcContext& ctx, const Tensor& weights, const Tensor& grad_out);

// Same accumulation restricted to the leading input.size() columns of
// `weights`. Columns past the input contribute nothing.
Tensor FcForwardLeadingColumns(std::span<const float> input, const Tensor& weights,
                               const Tensor& bias);

// ---- output ----------------------------------------------------------------

Tensor Softmax(const Tensor& logits);

struct LossAndGrad {
  float loss = 0.0f;
  Tensor grad_logits;  // probs - onehot(label)
};

inline constexpr float kLogEpsilon = 1e-12f;

LossAndGrad CrossEntropyLoss(const Tensor& probs, int label);

}  // namespace gdnn

#endif  // GDNN_LAYERS_H_
