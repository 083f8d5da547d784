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

#include "manifest.h"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

#include "gdnn/binary_io.h"
#include "gdnn/errors.h"

namespace gdnn::tools {

std::string Sha256Hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string Sha256Hex(std::span<const float> values) {
  return Sha256Hex(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(values.data()),
                                                 values.size_bytes()));
}

std::string Sha256File(const std::string& path) { return Sha256Hex(ReadFileBytes(path)); }

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {}

void RunManifest::AddInput(const std::string& path) { inputs_.push_back(path); }
void RunManifest::AddOutput(const std::string& path) { outputs_.push_back(path); }

nlohmann::json RunManifest::ToJson() const {
  auto files = [](const std::vector<std::string>& paths) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : paths) arr.push_back({{"path", p}, {"sha256", Sha256File(p)}});
    return arr;
  };
  return {{"command", command_}, {"tool_version", kToolVersion}, {"config", config_},
          {"seeds", seeds_},     {"inputs", files(inputs_)},     {"outputs", files(outputs_)}};
}

void RunManifest::Write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw LoadError(LoadError::Code::kIo, "cannot write manifest " + path);
  out << ToJson().dump(2) << "\n";
}

}  // namespace gdnn::tools
