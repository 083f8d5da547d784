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

#ifndef GDNN_TOOLS_MANIFEST_H_
#define GDNN_TOOLS_MANIFEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace gdnn::tools {

// Lower-case hex SHA-256.
std::string Sha256Hex(std::span<const std::uint8_t> bytes);
std::string Sha256Hex(std::span<const float> values);
std::string Sha256File(const std::string& path);

inline constexpr const char* kToolVersion = "1.0.0";

// Record of one CLI invocation: resolved configuration, seeds and the
// digests of every input and output file.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void SetConfig(const std::string& key, nlohmann::json value) { config_[key] = std::move(value); }
  void AddSeed(const std::string& key, std::uint64_t seed) { seeds_[key] = seed; }
  void AddInput(const std::string& path);
  void AddOutput(const std::string& path);

  nlohmann::json ToJson() const;
  void Write(const std::string& path) const;

 private:
  std::string command_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json seeds_ = nlohmann::json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

}  // namespace gdnn::tools

#endif  // GDNN_TOOLS_MANIFEST_H_
