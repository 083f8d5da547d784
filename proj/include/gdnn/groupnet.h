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

#ifndef GDNN_GROUPNET_H_
#define GDNN_GROUPNET_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gdnn/layers.h"
#include "gdnn/tensor.h"

namespace gdnn {

inline constexpr int kNumConvLayers = 5;

// Grouped AlexNet for 32x32 images. Every group owns an independent
// Conv1..Conv5 stack (with its own LRN after Conv1/Conv2 and pooling after
// Conv1, Conv2 and Conv5); pooled group features are concatenated in group
// order and fed to a single FC layer followed by softmax.
//
//   conv1 3x3 s1 p0 + relu -> lrn(5) -> maxpool 4/1
//   conv2 5x5 s1 p2 + relu -> lrn(5) -> maxpool 3/2
//   conv3 3x3 s1 p1 + relu
//   conv4 3x3 s1 p1 + relu
//   conv5 3x3 s1 p1 + relu           -> maxpool 3/2
//   concat(groups) -> fc -> softmax
//
// Conv1 of every group sees all input channels.
struct GroupNetArch {
  int num_groups = 4;
  int channels_per_group = 16;
  int input_channels = 3;
  int input_height = 32;
  int input_width = 32;
  int num_classes = 10;
  LrnSpec norm{5, 1e-4f, 0.75f, 1.0f};

  // Throws ConfigError when any count is non-positive or the layer stack
  // cannot be applied to the input size.
  void Validate() const;

  ConvSpec Conv(int layer) const;  // layer in [0, 5)
  PoolSpec Pool1() const { return {4, 1}; }
  PoolSpec Pool2() const { return {3, 2}; }
  PoolSpec Pool5() const { return {3, 2}; }

  // Spatial extent after pool5.
  int FinalExtent() const;
  int FeaturesPerGroup() const;  // channels_per_group * extent^2
  int FcInputs() const { return num_groups * FeaturesPerGroup(); }

  bool operator==(const GroupNetArch&) const = default;
};

// Per-layer, per-group parameters plus the number of groups trained so far.
// Groups are indexed from 0 here; a model "at width k" uses groups [0, k).
class GroupModel {
 public:
  GroupModel() = default;
  explicit GroupModel(const GroupNetArch& arch);

  const GroupNetArch& arch() const { return arch_; }
  int num_groups() const { return arch_.num_groups; }

  int trained_groups() const { return trained_groups_; }
  void set_trained_groups(int n);

  Tensor& conv_weight(int layer, int group) { return conv_w_[Index(layer, group)]; }
  const Tensor& conv_weight(int layer, int group) const { return conv_w_[Index(layer, group)]; }
  Tensor& conv_bias(int layer, int group) { return conv_b_[Index(layer, group)]; }
  const Tensor& conv_bias(int layer, int group) const { return conv_b_[Index(layer, group)]; }

  // [num_classes, G * FeaturesPerGroup]; group g owns the column block
  // [g*F, (g+1)*F).
  Tensor& fc_weight() { return fc_w_; }
  const Tensor& fc_weight() const { return fc_w_; }
  Tensor& fc_bias() { return fc_b_; }
  const Tensor& fc_bias() const { return fc_b_; }

  // Per-channel mean subtracted from pixel/255 during preprocessing.
  const std::vector<float>& input_mean() const { return input_mean_; }
  void set_input_mean(std::vector<float> mean);

  // Conv tensors of one group in (layer, weight, bias) order.
  std::vector<const Tensor*> GroupTensors(int group) const;

  // Zeroes the conv stacks and FC column blocks of groups [first, G).
  void ZeroGroupsFrom(int first);

  bool BitEqual(const GroupModel& other) const;

 private:
  std::size_t Index(int layer, int group) const;

  GroupNetArch arch_;
  int trained_groups_ = 0;
  std::vector<Tensor> conv_w_;
  std::vector<Tensor> conv_b_;
  Tensor fc_w_;
  Tensor fc_b_;
  std::vector<float> input_mean_;
};

// A fresh model: every parameter zero, trained_groups = 0. Per-group random
// initialisation happens when the trainer reaches that group.
GroupModel BuildModel(const GroupNetArch& arch);

struct Prediction {
  Tensor logits;
  Tensor probs;
};

// Everything a group stack backward needs.
struct GroupTrace {
  std::array<ConvContext, kNumConvLayers> conv;
  std::array<ReluContext, kNumConvLayers> relu;
  std::array<LrnContext, 2> norm;
  std::array<MaxPoolContext, 3> pool;
};

struct GroupGrads {
  std::array<Tensor, kNumConvLayers> weight;
  std::array<Tensor, kNumConvLayers> bias;
};

// Runs one group's conv stack and returns its flattened pooled features
// (length FeaturesPerGroup()).
Tensor GroupFeatures(const GroupModel& model, int group, const Tensor& image,
                     GroupTrace* trace = nullptr);

// Backward through one group's stack. The Conv1 input gradient is skipped.
GroupGrads GroupBackward(const GroupModel& model, int group, const GroupTrace& trace,
                         const Tensor& grad_features);

// FC + softmax over the leading features (k * FeaturesPerGroup values).
Prediction Classify(const GroupModel& model, std::span<const float> features);

// Inference at width k: only groups [0, k) are computed. Throws ConfigError
// when k is outside [1, trained_groups].
Prediction Forward(const GroupModel& model, const Tensor& image, int k);

// Evaluates every group regardless of trained_groups.
Prediction ForwardAllGroups(const GroupModel& model, const Tensor& image);

// Weights + biases of groups [0, k), the FC columns they feed and the FC
// bias.
std::int64_t ParamCount(const GroupNetArch& arch, int k);
std::int64_t ModelSizeBytes(const GroupNetArch& arch, int k);
// Multiply-accumulates of the conv stacks of k groups plus the FC over
// k * FeaturesPerGroup inputs.
std::int64_t Flops(const GroupNetArch& arch, int k);

}  // namespace gdnn

#endif  // GDNN_GROUPNET_H_
