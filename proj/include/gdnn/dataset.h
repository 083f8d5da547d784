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

#ifndef GDNN_DATASET_H_
#define GDNN_DATASET_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdnn/tensor.h"

namespace gdnn {

// ---- raw CIFAR-10 binary records --------------------------------------------

inline constexpr std::size_t kCifarPixels = 3072;
inline constexpr std::size_t kCifarRecordBytes = 1 + kCifarPixels;

// One label byte followed by 1024 red, 1024 green and 1024 blue bytes, each
// plane row-major 32x32.
struct Cifar10Record {
  std::uint8_t label = 0;
  std::array<std::uint8_t, kCifarPixels> pixels{};
};

// Throws IngestionError with the byte offset (relative to `base_offset`) of
// a truncated record or of a record whose label exceeds 9.
std::vector<Cifar10Record> ParseCifar10(std::span<const std::uint8_t> bytes,
                                        std::uint64_t base_offset = 0);
std::vector<std::uint8_t> SerializeCifar10(std::span<const Cifar10Record> records);

struct Cifar10Files {
  std::vector<Cifar10Record> train;  // data_batch_1..5 in order
  std::vector<Cifar10Record> test;   // test_batch
};

Cifar10Files LoadCifar10Dir(const std::string& dir);

// Synthetic 10-class images on a grey background.
//
// kMotifs: every class owns a set of small coloured patches ("motifs"); a
// sample pastes a few of its class motifs and some distractor motifs from a
// shared pool at random positions, then adds pixel noise. Recognising a class
// means detecting any one of its motifs, so accuracy grows with the number of
// feature detectors.
//
// kBlobs: every class is one Gaussian colour blob with a class-specific
// centre and colour; a sample jitters the centre and adds pixel noise.
enum class SyntheticKind { kMotifs, kBlobs };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kMotifs;
  int motifs_per_class = 5;
  int class_motifs_per_image = 2;
  int distractor_pool = 40;
  int distractors_per_image = 4;
  int motif_size = 6;        // square patch edge in pixels
  double amplitude = 100.0;  // peak colour deviation of a motif or blob pixel
  double noise_sd = 15.0;    // per-pixel Gaussian noise
  double blob_sigma = 5.0;   // blob radius in pixels
  int blob_jitter = 4;       // max centre shift per axis in pixels
};

std::vector<Cifar10Record> GenerateSynthetic(int count, int num_classes, std::uint64_t seed,
                                             std::uint64_t stream, const SyntheticSpec& spec = {});

// ---- preprocessed datasets --------------------------------------------------

// Preprocessed images (pixel/255 minus channel mean) with labels, stored
// contiguously.
class Dataset {
 public:
  Dataset() = default;
  Dataset(int channels, int height, int width, int num_classes);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  int num_classes() const { return num_classes_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t image_size() const { return static_cast<std::size_t>(channels_) * height_ * width_; }

  void Add(std::span<const float> image, int label, std::uint32_t source_index);

  Tensor Image(std::size_t i) const;
  std::span<const float> ImageData(std::size_t i) const;
  int label(std::size_t i) const { return labels_[i]; }
  std::uint32_t source_index(std::size_t i) const { return source_[i]; }
  const std::vector<float>& pixels() const { return pixels_; }

  // First `n` samples (or all when n exceeds the size).
  Dataset Head(std::size_t n) const;

  bool operator==(const Dataset&) const = default;

 private:
  int channels_ = 3, height_ = 32, width_ = 32, num_classes_ = 10;
  std::vector<float> pixels_;
  std::vector<int> labels_;
  std::vector<std::uint32_t> source_;
};

// Per-channel mean of pixel/255 over the records, accumulated in double.
std::vector<float> ChannelMean(std::span<const Cifar10Record> records);

// Appends records [first, last) as preprocessed samples.
void AppendRecords(Dataset& dst, std::span<const Cifar10Record> records, std::span<const float> mean,
                   std::uint32_t first_source_index);

struct DatasetArchive {
  int num_classes = 10;
  int channels = 3, height = 32, width = 32;
  std::vector<float> channel_mean;
  Dataset train;
  Dataset validation;
  Dataset test;

  bool operator==(const DatasetArchive&) const = default;
};

// Training records minus the trailing `val_count` become the train split; the
// held-out tail is validation. The mean comes from the train split only.
DatasetArchive BuildArchive(std::span<const Cifar10Record> train_pool,
                            std::span<const Cifar10Record> test, std::size_t val_count,
                            int num_classes);

// Archive layout (little-endian):
//   "GDDS" | version=1 | num_classes | C | H | W
//   tensor record "channel_mean" [C]
//   u32 split_count, then per split: string name, u32 count,
//   u32 source_index[count], u8 label[count],
//   tensor record "<name>.images" [count, C, H, W] (omitted when count = 0)
inline constexpr std::uint32_t kArchiveVersion = 1;

std::vector<std::uint8_t> EncodeArchive(const DatasetArchive& archive);
DatasetArchive DecodeArchive(std::span<const std::uint8_t> bytes);
void SaveArchive(const DatasetArchive& archive, const std::string& path);
DatasetArchive LoadArchive(const std::string& path);

}  // namespace gdnn

#endif  // GDNN_DATASET_H_
