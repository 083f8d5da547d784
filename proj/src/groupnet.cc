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

#include "gdnn/groupnet.h"

#include <string>

#include "gdnn/errors.h"

namespace gdnn {
namespace {

struct StackShape {
  int conv1, pool1, conv2, pool2, pool5;
};

StackShape ComputeShape(const GroupNetArch& a, int extent) {
  StackShape s{};
  s.conv1 = a.Conv(0).OutputExtent(extent);
  s.pool1 = a.Pool1().OutputExtent(s.conv1);
  s.conv2 = a.Conv(1).OutputExtent(s.pool1);
  s.pool2 = a.Pool2().OutputExtent(s.conv2);
  // conv3..5 are size preserving (3x3, pad 1)
  s.pool5 = a.Pool5().OutputExtent(s.pool2);
  return s;
}

Tensor Flatten(Tensor t) {
  const int n = static_cast<int>(t.size());
  std::vector<float> data(t.values().begin(), t.values().end());
  return Tensor({n}, std::move(data));
}

}  // namespace

// ---- architecture ----------------------------------------------------------

ConvSpec GroupNetArch::Conv(int layer) const {
  const int c = channels_per_group;
  switch (layer) {
    case 0: return {3, 1, 0, input_channels, c};
    case 1: return {5, 1, 2, c, c};
    case 2:
    case 3:
    case 4: return {3, 1, 1, c, c};
    default: throw ConfigError("conv layer index " + std::to_string(layer) + " out of range");
  }
}

void GroupNetArch::Validate() const {
  if (num_groups < 1 || channels_per_group < 1 || input_channels < 1 || num_classes < 1) {
    throw ConfigError("architecture counts must be positive (groups=" + std::to_string(num_groups) +
                      ", channels/group=" + std::to_string(channels_per_group) +
                      ", classes=" + std::to_string(num_classes) + ")");
  }
  if (!(norm.alpha > 0.0f)) throw ConfigError("architecture LRN alpha must be positive");
  norm.Validate();
  if (input_height != input_width) throw ConfigError("architecture expects square inputs");
  try {
    ComputeShape(*this, input_height);
  } catch (const DimensionError& e) {
    throw ConfigError("input " + std::to_string(input_height) + "x" + std::to_string(input_width) +
                      " too small for the layer stack: " + e.what());
  }
}

int GroupNetArch::FinalExtent() const { return ComputeShape(*this, input_height).pool5; }

int GroupNetArch::FeaturesPerGroup() const {
  const int e = FinalExtent();
  return channels_per_group * e * e;
}

// ---- model -----------------------------------------------------------------

GroupModel::GroupModel(const GroupNetArch& arch) : arch_(arch) {
  arch_.Validate();
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    const ConvSpec spec = arch_.Conv(layer);
    for (int g = 0; g < arch_.num_groups; ++g) {
      conv_w_.emplace_back(std::vector<int>{spec.out_channels, spec.in_channels, spec.kernel, spec.kernel});
      conv_b_.emplace_back(std::vector<int>{spec.out_channels});
    }
  }
  fc_w_ = Tensor({arch_.num_classes, arch_.FcInputs()});
  fc_b_ = Tensor({arch_.num_classes});
  input_mean_.assign(arch_.input_channels, 0.0f);
}

std::size_t GroupModel::Index(int layer, int group) const {
  if (layer < 0 || layer >= kNumConvLayers || group < 0 || group >= arch_.num_groups) {
    throw ConfigError("no parameters for layer " + std::to_string(layer) + " group " +
                      std::to_string(group));
  }
  return static_cast<std::size_t>(layer) * arch_.num_groups + group;
}

void GroupModel::set_trained_groups(int n) {
  if (n < 0 || n > arch_.num_groups) {
    throw ConfigError("trained_groups " + std::to_string(n) + " outside [0, " +
                      std::to_string(arch_.num_groups) + "]");
  }
  trained_groups_ = n;
}

void GroupModel::set_input_mean(std::vector<float> mean) {
  if (static_cast<int>(mean.size()) != arch_.input_channels) {
    throw DimensionError("input mean needs " + std::to_string(arch_.input_channels) + " channels");
  }
  input_mean_ = std::move(mean);
}

std::vector<const Tensor*> GroupModel::GroupTensors(int group) const {
  std::vector<const Tensor*> out;
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    out.push_back(&conv_weight(layer, group));
    out.push_back(&conv_bias(layer, group));
  }
  return out;
}

void GroupModel::ZeroGroupsFrom(int first) {
  for (int g = std::max(first, 0); g < arch_.num_groups; ++g) {
    for (int layer = 0; layer < kNumConvLayers; ++layer) {
      conv_weight(layer, g).Fill(0.0f);
      conv_bias(layer, g).Fill(0.0f);
    }
  }
  const int f = arch_.FeaturesPerGroup();
  const int cols = arch_.FcInputs();
  for (int o = 0; o < arch_.num_classes; ++o) {
    for (int d = std::max(first, 0) * f; d < cols; ++d) fc_w_[static_cast<std::size_t>(o) * cols + d] = 0.0f;
  }
}

bool GroupModel::BitEqual(const GroupModel& other) const {
  if (!(arch_ == other.arch_) || trained_groups_ != other.trained_groups_ ||
      input_mean_ != other.input_mean_ || !fc_w_.BitEqual(other.fc_w_) ||
      !fc_b_.BitEqual(other.fc_b_)) {
    return false;
  }
  for (std::size_t i = 0; i < conv_w_.size(); ++i) {
    if (!conv_w_[i].BitEqual(other.conv_w_[i]) || !conv_b_[i].BitEqual(other.conv_b_[i])) return false;
  }
  return true;
}

GroupModel BuildModel(const GroupNetArch& arch) { return GroupModel(arch); }

// ---- forward / backward ----------------------------------------------------

Tensor GroupFeatures(const GroupModel& model, int group, const Tensor& image, GroupTrace* trace) {
  const GroupNetArch& a = model.arch();
  const std::vector<int> want = {a.input_channels, a.input_height, a.input_width};
  if (image.dims() != want) {
    throw DimensionError("input image " + image.ShapeString() + " does not match architecture");
  }
  auto conv = [&](int layer, const Tensor& x) {
    static const char* kNames[] = {"conv1", "conv2", "conv3", "conv4", "conv5"};
    Tensor y = Conv2dForward(x, model.conv_weight(layer, group), model.conv_bias(layer, group),
                             a.Conv(layer), trace ? &trace->conv[layer] : nullptr, kNames[layer]);
    return ReluForward(y, trace ? &trace->relu[layer] : nullptr);
  };
  Tensor x = conv(0, image);
  x = LrnForward(x, a.norm, trace ? &trace->norm[0] : nullptr);
  x = MaxPoolForward(x, a.Pool1(), trace ? &trace->pool[0] : nullptr, "pool1");
  x = conv(1, x);
  x = LrnForward(x, a.norm, trace ? &trace->norm[1] : nullptr);
  x = MaxPoolForward(x, a.Pool2(), trace ? &trace->pool[1] : nullptr, "pool2");
  x = conv(2, x);
  x = conv(3, x);
  x = conv(4, x);
  x = MaxPoolForward(x, a.Pool5(), trace ? &trace->pool[2] : nullptr, "pool5");
  return Flatten(std::move(x));
}

GroupGrads GroupBackward(const GroupModel& model, int group, const GroupTrace& trace,
                         const Tensor& grad_features) {
  GroupGrads grads;
  auto conv_back = [&](int layer, const Tensor& g, bool want_input) {
    Tensor gr = ReluBackward(trace.relu[layer], g);
    ConvGrads cg = Conv2dBackward(trace.conv[layer], model.conv_weight(layer, group), gr, want_input);
    grads.weight[layer] = std::move(cg.weights);
    grads.bias[layer] = std::move(cg.bias);
    return std::move(cg.input);
  };
  Tensor g = MaxPoolBackward(trace.pool[2], grad_features);
  g = conv_back(4, g, true);
  g = conv_back(3, g, true);
  g = conv_back(2, g, true);
  g = MaxPoolBackward(trace.pool[1], g);
  g = LrnBackward(trace.norm[1], g);
  g = conv_back(1, g, true);
  g = MaxPoolBackward(trace.pool[0], g);
  g = LrnBackward(trace.norm[0], g);
  conv_back(0, g, false);
  return grads;
}

Prediction Classify(const GroupModel& model, std::span<const float> features) {
  Prediction p;
  p.logits = FcForwardLeadingColumns(features, model.fc_weight(), model.fc_bias());
  p.probs = Softmax(p.logits);
  return p;
}

Prediction Forward(const GroupModel& model, const Tensor& image, int k) {
  if (k < 1 || k > model.num_groups()) {
    throw ConfigError("config k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(model.num_groups()) + "]");
  }
  if (k > model.trained_groups()) {
    throw ConfigError("model not trained to this width (k=" + std::to_string(k) +
                      ", trained groups=" + std::to_string(model.trained_groups()) + ")");
  }
  const int f = model.arch().FeaturesPerGroup();
  std::vector<float> features(static_cast<std::size_t>(k) * f);
  for (int g = 0; g < k; ++g) {
    Tensor feat = GroupFeatures(model, g, image);
    std::copy(feat.values().begin(), feat.values().end(), features.begin() + static_cast<std::size_t>(g) * f);
  }
  return Classify(model, features);
}

Prediction ForwardAllGroups(const GroupModel& model, const Tensor& image) {
  const int f = model.arch().FeaturesPerGroup();
  std::vector<float> features(static_cast<std::size_t>(model.num_groups()) * f);
  for (int g = 0; g < model.num_groups(); ++g) {
    Tensor feat = GroupFeatures(model, g, image);
    std::copy(feat.values().begin(), feat.values().end(), features.begin() + static_cast<std::size_t>(g) * f);
  }
  return Classify(model, features);
}

// ---- counting --------------------------------------------------------------

namespace {

void CheckWidth(const GroupNetArch& arch, int k) {
  arch.Validate();
  if (k < 0 || k > arch.num_groups) {
    throw ConfigError("width k=" + std::to_string(k) + " outside [0, " +
                      std::to_string(arch.num_groups) + "]");
  }
}

}  // namespace

std::int64_t ParamCount(const GroupNetArch& arch, int k) {
  CheckWidth(arch, k);
  std::int64_t per_group = 0;
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    const ConvSpec s = arch.Conv(layer);
    per_group += static_cast<std::int64_t>(s.out_channels) * s.in_channels * s.kernel * s.kernel +
                 s.out_channels;
  }
  const std::int64_t fc_cols = static_cast<std::int64_t>(arch.num_classes) * arch.FeaturesPerGroup();
  return k * (per_group + fc_cols) + arch.num_classes;
}

std::int64_t ModelSizeBytes(const GroupNetArch& arch, int k) {
  return ParamCount(arch, k) * static_cast<std::int64_t>(sizeof(float));
}

std::int64_t Flops(const GroupNetArch& arch, int k) {
  CheckWidth(arch, k);
  const StackShape s = ComputeShape(arch, arch.input_height);
  const int out_extent[kNumConvLayers] = {s.conv1, s.conv2, s.pool2, s.pool2, s.pool2};
  std::int64_t per_group = 0;
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    const ConvSpec c = arch.Conv(layer);
    per_group += static_cast<std::int64_t>(out_extent[layer]) * out_extent[layer] * c.out_channels *
                 c.in_channels * c.kernel * c.kernel;
  }
  const std::int64_t fc = static_cast<std::int64_t>(arch.num_classes) * arch.FeaturesPerGroup();
  return k * (per_group + fc);
}

}  // namespace gdnn
