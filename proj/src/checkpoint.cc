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

#include "gdnn/checkpoint.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gdnn/binary_io.h"
#include "gdnn/errors.h"

namespace gdnn {

std::vector<std::uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadError::Code::kIo, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError(LoadError::Code::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw LoadError(LoadError::Code::kIo, "write failed for " + path);
}

namespace {

constexpr char kMagic[4] = {'G', 'D', 'N', 'N'};

std::string ConvName(int layer, int group, const char* part) {
  return "conv" + std::to_string(layer + 1) + ".group" + std::to_string(group + 1) + "." + part;
}

}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const GroupModel& model) {
  const GroupNetArch& a = model.arch();
  ByteWriter w;
  for (char c : kMagic) w.PutU8(static_cast<std::uint8_t>(c));
  w.PutU32(kCheckpointVersion);
  w.PutU32(static_cast<std::uint32_t>(a.num_groups));
  w.PutU32(static_cast<std::uint32_t>(a.channels_per_group));
  w.PutU32(static_cast<std::uint32_t>(a.num_classes));
  w.PutU32(static_cast<std::uint32_t>(model.trained_groups()));
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    for (int g = 0; g < a.num_groups; ++g) {
      w.PutTensor(ConvName(layer, g, "weight"), model.conv_weight(layer, g));
      w.PutTensor(ConvName(layer, g, "bias"), model.conv_bias(layer, g));
    }
  }
  w.PutTensor("fc.weight", model.fc_weight());
  w.PutTensor("fc.bias", model.fc_bias());
  const int c = a.input_channels;
  w.PutTensor("ext.input_mean", Tensor({c}, model.input_mean()));
  w.PutTensor("ext.input_shape",
              Tensor({3}, {static_cast<float>(c), static_cast<float>(a.input_height),
                           static_cast<float>(a.input_width)}));
  return w.Take();
}

GroupModel DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw LoadError(LoadError::Code::kTruncated, "checkpoint shorter than its magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw LoadError(LoadError::Code::kBadMagic, "bad magic: not a GDNN checkpoint");
  }
  ByteReader r(bytes.subspan(4));
  const std::uint32_t version = r.GetU32();
  if (version != kCheckpointVersion) {
    throw LoadError(LoadError::Code::kBadVersion,
                    "unsupported checkpoint version " + std::to_string(version));
  }
  GroupNetArch arch;
  arch.num_groups = static_cast<int>(r.GetU32());
  arch.channels_per_group = static_cast<int>(r.GetU32());
  arch.num_classes = static_cast<int>(r.GetU32());
  const int trained = static_cast<int>(r.GetU32());

  std::vector<TensorRecord> records;
  while (!r.done()) records.push_back(r.GetTensor());

  std::vector<float> mean;
  for (const auto& rec : records) {
    if (rec.name == "ext.input_shape") {
      if (rec.tensor.size() != 3) {
        throw LoadError(LoadError::Code::kDimMismatch, "ext.input_shape must hold 3 values");
      }
      for (float v : rec.tensor.values()) {
        if (!(v >= 1.0f && v <= 4096.0f) || v != std::floor(v)) {
          throw LoadError(LoadError::Code::kDimMismatch, "ext.input_shape holds a non-integral or out-of-range extent");
        }
      }
      arch.input_channels = static_cast<int>(rec.tensor[0]);
      arch.input_height = static_cast<int>(rec.tensor[1]);
      arch.input_width = static_cast<int>(rec.tensor[2]);
    } else if (rec.name == "ext.input_mean") {
      mean.assign(rec.tensor.values().begin(), rec.tensor.values().end());
    }
  }
  try {
    arch.Validate();
  } catch (const ConfigError& e) {
    throw LoadError(LoadError::Code::kDimMismatch, std::string("checkpoint header: ") + e.what());
  }
  // A corrupt header must not drive a huge allocation: every parameter it
  // declares has to be backed by bytes in the file.
  constexpr int kMaxCount = 1 << 16;
  if (arch.num_groups > kMaxCount || arch.channels_per_group > kMaxCount || arch.num_classes > kMaxCount ||
      ModelSizeBytes(arch, arch.num_groups) > static_cast<std::int64_t>(bytes.size())) {
    throw LoadError(LoadError::Code::kDimMismatch, "checkpoint header declares more parameters than the file holds");
  }
  GroupModel model(arch);
  if (trained < 0 || trained > arch.num_groups) {
    throw LoadError(LoadError::Code::kDimMismatch,
                    "trained_groups " + std::to_string(trained) + " exceeds group count");
  }
  model.set_trained_groups(trained);

  std::size_t next = 0;
  auto take = [&](const std::string& name, Tensor& dst) {
    if (next >= records.size()) {
      throw LoadError(LoadError::Code::kTruncated, "missing record " + name);
    }
    TensorRecord& rec = records[next++];
    if (rec.name != name) {
      throw LoadError(LoadError::Code::kBadRecord,
                      "expected record " + name + ", found " + rec.name);
    }
    if (rec.tensor.dims() != dst.dims()) {
      throw LoadError(LoadError::Code::kDimMismatch, "record " + name + " has shape " +
                                                         rec.tensor.ShapeString() + ", expected " +
                                                         dst.ShapeString());
    }
    dst = std::move(rec.tensor);
  };
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    for (int g = 0; g < arch.num_groups; ++g) {
      take(ConvName(layer, g, "weight"), model.conv_weight(layer, g));
      take(ConvName(layer, g, "bias"), model.conv_bias(layer, g));
    }
  }
  take("fc.weight", model.fc_weight());
  take("fc.bias", model.fc_bias());
  for (; next < records.size(); ++next) {
    if (records[next].name.rfind("ext.", 0) != 0) {
      throw LoadError(LoadError::Code::kBadRecord, "unexpected record " + records[next].name);
    }
  }
  if (!mean.empty()) {
    if (static_cast<int>(mean.size()) != arch.input_channels) {
      throw LoadError(LoadError::Code::kDimMismatch, "ext.input_mean does not match input channels");
    }
    model.set_input_mean(std::move(mean));
  }
  return model;
}

void SaveCheckpoint(const GroupModel& model, const std::string& path) {
  WriteFileBytes(path, EncodeCheckpoint(model));
}

GroupModel LoadCheckpoint(const std::string& path) { return DecodeCheckpoint(ReadFileBytes(path)); }

}  // namespace gdnn
