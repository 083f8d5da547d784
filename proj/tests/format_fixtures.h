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

// Malformed checkpoint and archive fixtures, derived from valid encodings by
// targeted byte edits. Shared by the unit tests and the acceptance binary.

#ifndef GDNN_TESTS_FORMAT_FIXTURES_H_
#define GDNN_TESTS_FORMAT_FIXTURES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gdnn/errors.h"

namespace gdnn::testing {

struct MalformedFixture {
  std::string name;
  std::vector<std::uint8_t> bytes;
  LoadError::Code expected;
};

inline void PokeU32(std::vector<std::uint8_t>& b, std::size_t offset, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[offset + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

// Header fields after the 4-byte magic: version at 4, then four u32 counts.
// Offset 16 holds num_classes in a checkpoint; in an archive it holds H.
inline std::vector<MalformedFixture> MalformedVariants(const std::vector<std::uint8_t>& good) {
  std::vector<MalformedFixture> out;
  auto magic = good;
  magic[0] = 'X';
  out.push_back({"bad_magic", magic, LoadError::Code::kBadMagic});
  auto version = good;
  PokeU32(version, 4, 7);
  out.push_back({"bad_version", version, LoadError::Code::kBadVersion});
  out.push_back({"truncated", std::vector<std::uint8_t>(good.begin(), good.end() - 9),
                 LoadError::Code::kTruncated});
  out.push_back({"header_only", std::vector<std::uint8_t>(good.begin(), good.begin() + 10),
                 LoadError::Code::kTruncated});
  return out;
}

}  // namespace gdnn::testing

#endif  // GDNN_TESTS_FORMAT_FIXTURES_H_
