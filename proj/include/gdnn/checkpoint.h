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

#ifndef GDNN_CHECKPOINT_H_
#define GDNN_CHECKPOINT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdnn/groupnet.h"

// Checkpoint layout (all integers u32 little-endian, floats IEEE-754 LE):
//
//   "GDNN" | version=1 | G | channels_per_group | num_classes | trained_groups
//   conv1.group1.weight, conv1.group1.bias, ..., conv1.groupG.bias,
//   conv2.group1.weight, ...                       (tensor records)
//   fc.weight [num_classes, G*F], fc.bias [num_classes]
//   extension records until end of file:
//     ext.input_mean  [C]      preprocessing channel mean
//     ext.input_shape [3]      C, H, W as floats
//
// Inactive groups are stored (all zero) so a later increment can fill them in
// place.
namespace gdnn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> EncodeCheckpoint(const GroupModel& model);
GroupModel DecodeCheckpoint(std::span<const std::uint8_t> bytes);

void SaveCheckpoint(const GroupModel& model, const std::string& path);
GroupModel LoadCheckpoint(const std::string& path);

}  // namespace gdnn

#endif  // GDNN_CHECKPOINT_H_
