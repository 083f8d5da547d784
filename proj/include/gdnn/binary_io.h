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

#ifndef GDNN_BINARY_IO_H_
#define GDNN_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdnn/errors.h"
#include "gdnn/tensor.h"

// Little-endian byte encoding shared by the checkpoint and dataset archive
// formats. A tensor record is:
//   u32 name_len, name bytes (UTF-8), u32 rank, u32 dims[rank], f32 payload.
namespace gdnn {

class ByteWriter {
 public:
  void PutU8(std::uint8_t v) { bytes_.push_back(v); }
  void PutU32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void PutF32(float v) { PutU32(std::bit_cast<std::uint32_t>(v)); }
  void PutBytes(std::span<const std::uint8_t> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }
  void PutString(std::string_view s) {
    PutU32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void PutTensor(std::string_view name, const Tensor& t) {
    PutString(name);
    PutU32(static_cast<std::uint32_t>(t.rank()));
    for (int d : t.dims()) PutU32(static_cast<std::uint32_t>(d));
    for (float v : t.values()) PutF32(v);
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

struct TensorRecord {
  std::string name;
  Tensor tensor;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool done() const { return pos_ == bytes_.size(); }

  std::uint8_t GetU8() {
    Need(1);
    return bytes_[pos_++];
  }
  std::uint32_t GetU32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float GetF32() { return std::bit_cast<float>(GetU32()); }
  std::span<const std::uint8_t> GetBytes(std::size_t n) {
    Need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::string GetString() {
    const std::uint32_t n = GetU32();
    auto s = GetBytes(n);
    return std::string(s.begin(), s.end());
  }
  TensorRecord GetTensor() {
    TensorRecord r;
    r.name = GetString();
    const std::uint32_t rank = GetU32();
    if (rank == 0 || rank > 8) {
      throw LoadError(LoadError::Code::kBadRecord,
                      "record '" + r.name + "' has unsupported rank " + std::to_string(rank));
    }
    std::vector<int> dims(rank);
    std::uint64_t count = 1;
    for (auto& d : dims) {
      const std::uint32_t v = GetU32();
      if (v == 0 || v > (1u << 30)) {
        throw LoadError(LoadError::Code::kBadRecord,
                        "record '" + r.name + "' has invalid dim " + std::to_string(v));
      }
      d = static_cast<int>(v);
      count *= v;
    }
    if (count * 4 > remaining()) {
      throw LoadError(LoadError::Code::kTruncated,
                      "record '" + r.name + "' payload truncated at offset " + std::to_string(pos_));
    }
    std::vector<float> data(count);
    for (auto& v : data) v = GetF32();
    r.tensor = Tensor(std::move(dims), std::move(data));
    return r;
  }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw LoadError(LoadError::Code::kTruncated,
                      "unexpected end of data at offset " + std::to_string(pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace gdnn

#endif  // GDNN_BINARY_IO_H_
