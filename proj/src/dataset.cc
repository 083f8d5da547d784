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

#include "gdnn/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "gdnn/binary_io.h"
#include "gdnn/errors.h"
#include "gdnn/random.h"

namespace gdnn {

// ---- CIFAR-10 records --------------------------------------------------------

std::vector<Cifar10Record> ParseCifar10(std::span<const std::uint8_t> bytes,
                                        std::uint64_t base_offset) {
  std::vector<Cifar10Record> out;
  out.reserve(bytes.size() / kCifarRecordBytes);
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kCifarRecordBytes) {
      throw IngestionError(base_offset + pos,
                           "truncated CIFAR-10 record: " + std::to_string(bytes.size() - pos) +
                               " trailing bytes, expected " + std::to_string(kCifarRecordBytes));
    }
    Cifar10Record rec;
    rec.label = bytes[pos];
    if (rec.label > 9) {
      throw IngestionError(base_offset + pos, "label " + std::to_string(rec.label) + " > 9");
    }
    std::memcpy(rec.pixels.data(), bytes.data() + pos + 1, kCifarPixels);
    out.push_back(rec);
    pos += kCifarRecordBytes;
  }
  return out;
}

std::vector<std::uint8_t> SerializeCifar10(std::span<const Cifar10Record> records) {
  std::vector<std::uint8_t> out;
  out.reserve(records.size() * kCifarRecordBytes);
  for (const auto& r : records) {
    out.push_back(r.label);
    out.insert(out.end(), r.pixels.begin(), r.pixels.end());
  }
  return out;
}

Cifar10Files LoadCifar10Dir(const std::string& dir) {
  namespace fs = std::filesystem;
  Cifar10Files files;
  auto load = [&](const std::string& name, std::vector<Cifar10Record>& dst) {
    const fs::path p = fs::path(dir) / name;
    if (!fs::exists(p)) throw InputError("missing CIFAR-10 file " + p.string());
    std::vector<std::uint8_t> bytes = ReadFileBytes(p.string());
    try {
      auto recs = ParseCifar10(bytes);
      dst.insert(dst.end(), recs.begin(), recs.end());
    } catch (const IngestionError& e) {
      throw IngestionError(e.offset(), p.filename().string() + ": " + e.what());
    }
  };
  for (int b = 1; b <= 5; ++b) load("data_batch_" + std::to_string(b) + ".bin", files.train);
  load("test_batch.bin", files.test);
  return files;
}

// ---- synthetic ----------------------------------------------------------------

namespace {

// [motif_size^2 * 3] colour offsets in CHW order.
using Motif = std::vector<double>;

// Random colours on a grid of 2x2 pixel cells, so motifs have structure at
// the scale of the first convolutions.
Motif RandomMotif(Rng& rng, int size, double amplitude) {
  const int cells = (size + 1) / 2;
  std::vector<double> grid(static_cast<std::size_t>(cells) * cells * 3);
  for (double& v : grid) v = amplitude * rng.Uniform(-1.0f, 1.0f);
  Motif m(static_cast<std::size_t>(size) * size * 3);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) m[(c * size + y) * size + x] = grid[(c * cells + y / 2) * cells + x / 2];
    }
  }
  return m;
}

void Paste(const Motif& m, int size, int x0, int y0, std::vector<double>& img) {
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        img[c * 1024 + (y0 + y) * 32 + x0 + x] = 128.0 + m[(c * size + y) * size + x];
      }
    }
  }
}

std::uint8_t ToPixel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

std::vector<Cifar10Record> GenerateBlobs(int count, int num_classes, std::uint64_t seed, std::uint64_t stream,
                                         const SyntheticSpec& spec) {
  if (!(spec.blob_sigma > 0.0) || spec.blob_jitter < 0) throw InputError("invalid synthetic spec");
  struct Blob {
    double cx, cy;
    double colour[3];
  };
  std::vector<Blob> blobs(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    Rng rng(MixSeed({seed, 0xB10Bu, static_cast<std::uint64_t>(c)}));
    blobs[c].cx = 8.0 + 16.0 * rng.Uniform();
    blobs[c].cy = 8.0 + 16.0 * rng.Uniform();
    for (double& v : blobs[c].colour) v = spec.amplitude * rng.Uniform(-1.0f, 1.0f);
  }
  const double inv = 1.0 / (2.0 * spec.blob_sigma * spec.blob_sigma);
  std::vector<Cifar10Record> out(count);
  for (int i = 0; i < count; ++i) {
    Rng rng(MixSeed({seed, stream, static_cast<std::uint64_t>(i)}));
    const int label = static_cast<int>(rng.Below(num_classes));
    const int span = 2 * spec.blob_jitter + 1;
    const double cx = blobs[label].cx + static_cast<double>(rng.Below(span)) - spec.blob_jitter;
    const double cy = blobs[label].cy + static_cast<double>(rng.Below(span)) - spec.blob_jitter;
    Cifar10Record& rec = out[i];
    rec.label = static_cast<std::uint8_t>(label);
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
          const double g = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) * inv);
          rec.pixels[c * 1024 + y * 32 + x] = ToPixel(128.0 + blobs[label].colour[c] * g + spec.noise_sd * rng.Normal());
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Cifar10Record> GenerateSynthetic(int count, int num_classes, std::uint64_t seed,
                                             std::uint64_t stream, const SyntheticSpec& spec) {
  if (count < 0) throw InputError("synthetic sample count must be non-negative");
  if (num_classes < 1 || num_classes > 10) {
    throw InputError("synthetic class count must be in [1, 10], got " + std::to_string(num_classes));
  }
  if (spec.motifs_per_class < 1 || spec.class_motifs_per_image < 1 || spec.distractor_pool < 0 ||
      spec.distractors_per_image < 0 || spec.motif_size < 1 || spec.motif_size > 32 ||
      (spec.distractors_per_image > 0 && spec.distractor_pool == 0)) {
    throw InputError("invalid synthetic spec");
  }
  if (spec.kind == SyntheticKind::kBlobs) return GenerateBlobs(count, num_classes, seed, stream, spec);
  const int size = spec.motif_size;
  std::vector<std::vector<Motif>> class_motifs(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    Rng rng(MixSeed({seed, 0xB10Bu, static_cast<std::uint64_t>(c)}));
    for (int m = 0; m < spec.motifs_per_class; ++m) class_motifs[c].push_back(RandomMotif(rng, size, spec.amplitude));
  }
  std::vector<Motif> distractors;
  Rng pool_rng(MixSeed({seed, 0xD15Cu}));
  for (int m = 0; m < spec.distractor_pool; ++m) distractors.push_back(RandomMotif(pool_rng, size, spec.amplitude));

  std::vector<Cifar10Record> out(count);
  std::vector<double> img(kCifarPixels);
  for (int i = 0; i < count; ++i) {
    Rng rng(MixSeed({seed, stream, static_cast<std::uint64_t>(i)}));
    const int label = static_cast<int>(rng.Below(num_classes));
    std::fill(img.begin(), img.end(), 128.0);
    auto place = [&](const Motif& m) {
      const int x0 = static_cast<int>(rng.Below(33 - size)), y0 = static_cast<int>(rng.Below(33 - size));
      Paste(m, size, x0, y0, img);
    };
    // Distractors first so class motifs stay on top where they overlap.
    for (int k = 0; k < spec.distractors_per_image; ++k) place(distractors[rng.Below(distractors.size())]);
    for (int k = 0; k < spec.class_motifs_per_image; ++k) {
      place(class_motifs[label][rng.Below(spec.motifs_per_class)]);
    }
    Cifar10Record& rec = out[i];
    rec.label = static_cast<std::uint8_t>(label);
    for (std::size_t p = 0; p < kCifarPixels; ++p) {
      rec.pixels[p] = ToPixel(img[p] + spec.noise_sd * rng.Normal());
    }
  }
  return out;
}

// ---- Dataset ------------------------------------------------------------------

Dataset::Dataset(int channels, int height, int width, int num_classes)
    : channels_(channels), height_(height), width_(width), num_classes_(num_classes) {}

void Dataset::Add(std::span<const float> image, int label, std::uint32_t source_index) {
  if (image.size() != image_size()) {
    throw DimensionError("image of " + std::to_string(image.size()) + " values, expected " +
                         std::to_string(image_size()));
  }
  if (label < 0 || label >= num_classes_) {
    throw InputError("label " + std::to_string(label) + " outside [0, " + std::to_string(num_classes_) + ")");
  }
  pixels_.insert(pixels_.end(), image.begin(), image.end());
  labels_.push_back(label);
  source_.push_back(source_index);
}

std::span<const float> Dataset::ImageData(std::size_t i) const {
  return std::span<const float>(pixels_).subspan(i * image_size(), image_size());
}

Tensor Dataset::Image(std::size_t i) const {
  auto s = ImageData(i);
  return Tensor({channels_, height_, width_}, std::vector<float>(s.begin(), s.end()));
}

Dataset Dataset::Head(std::size_t n) const {
  Dataset out(channels_, height_, width_, num_classes_);
  for (std::size_t i = 0; i < std::min(n, size()); ++i) out.Add(ImageData(i), labels_[i], source_[i]);
  return out;
}

std::vector<float> ChannelMean(std::span<const Cifar10Record> records) {
  std::vector<double> sum(3, 0.0);
  for (const auto& r : records) {
    for (int c = 0; c < 3; ++c) {
      for (int p = 0; p < 1024; ++p) sum[c] += r.pixels[c * 1024 + p] / 255.0;
    }
  }
  std::vector<float> mean(3, 0.0f);
  if (records.empty()) return mean;
  for (int c = 0; c < 3; ++c) mean[c] = static_cast<float>(sum[c] / (1024.0 * records.size()));
  return mean;
}

void AppendRecords(Dataset& dst, std::span<const Cifar10Record> records, std::span<const float> mean,
                   std::uint32_t first_source_index) {
  std::vector<float> img(kCifarPixels);
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      for (int p = 0; p < 1024; ++p) {
        img[c * 1024 + p] = static_cast<float>(records[i].pixels[c * 1024 + p]) / 255.0f - mean[c];
      }
    }
    dst.Add(img, records[i].label, first_source_index + static_cast<std::uint32_t>(i));
  }
}

DatasetArchive BuildArchive(std::span<const Cifar10Record> train_pool,
                            std::span<const Cifar10Record> test, std::size_t val_count,
                            int num_classes) {
  if (val_count >= train_pool.size()) {
    throw InputError("validation split of " + std::to_string(val_count) +
                     " leaves no training images out of " + std::to_string(train_pool.size()));
  }
  const std::size_t n_train = train_pool.size() - val_count;
  DatasetArchive a;
  a.num_classes = num_classes;
  a.channel_mean = ChannelMean(train_pool.first(n_train));
  a.train = Dataset(3, 32, 32, num_classes);
  a.validation = Dataset(3, 32, 32, num_classes);
  a.test = Dataset(3, 32, 32, num_classes);
  AppendRecords(a.train, train_pool.first(n_train), a.channel_mean, 0);
  AppendRecords(a.validation, train_pool.subspan(n_train), a.channel_mean,
                static_cast<std::uint32_t>(n_train));
  AppendRecords(a.test, test, a.channel_mean, 0);
  return a;
}

// ---- archive --------------------------------------------------------------------

namespace {

constexpr char kArchiveMagic[4] = {'G', 'D', 'D', 'S'};

void PutSplit(ByteWriter& w, const std::string& name, const Dataset& d) {
  w.PutString(name);
  w.PutU32(static_cast<std::uint32_t>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) w.PutU32(d.source_index(i));
  for (std::size_t i = 0; i < d.size(); ++i) w.PutU8(static_cast<std::uint8_t>(d.label(i)));
  if (d.size() > 0) {
    w.PutTensor(name + ".images",
                Tensor({static_cast<int>(d.size()), d.channels(), d.height(), d.width()}, d.pixels()));
  }
}

Dataset GetSplit(ByteReader& r, const std::string& expect, const DatasetArchive& a) {
  const std::string name = r.GetString();
  if (name != expect) {
    throw LoadError(LoadError::Code::kBadRecord, "expected split " + expect + ", found " + name);
  }
  const std::uint32_t count = r.GetU32();
  if (static_cast<std::uint64_t>(count) * 5 > r.remaining()) {
    throw LoadError(LoadError::Code::kTruncated, "split " + name + " truncated");
  }
  std::vector<std::uint32_t> source(count);
  for (auto& s : source) s = r.GetU32();
  std::vector<int> labels(count);
  for (auto& l : labels) l = r.GetU8();
  Dataset d(a.channels, a.height, a.width, a.num_classes);
  if (count == 0) return d;
  TensorRecord rec = r.GetTensor();
  const std::vector<int> want = {static_cast<int>(count), a.channels, a.height, a.width};
  if (rec.name != name + ".images") {
    throw LoadError(LoadError::Code::kBadRecord, "expected " + name + ".images, found " + rec.name);
  }
  if (rec.tensor.dims() != want) {
    throw LoadError(LoadError::Code::kDimMismatch,
                    "split " + name + " images have shape " + rec.tensor.ShapeString());
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    if (labels[i] >= a.num_classes) {
      throw LoadError(LoadError::Code::kBadRecord, "split " + name + " label out of range");
    }
    d.Add(rec.tensor.values().subspan(i * d.image_size(), d.image_size()), labels[i], source[i]);
  }
  return d;
}

}  // namespace

std::vector<std::uint8_t> EncodeArchive(const DatasetArchive& a) {
  ByteWriter w;
  for (char c : kArchiveMagic) w.PutU8(static_cast<std::uint8_t>(c));
  w.PutU32(kArchiveVersion);
  w.PutU32(static_cast<std::uint32_t>(a.num_classes));
  w.PutU32(static_cast<std::uint32_t>(a.channels));
  w.PutU32(static_cast<std::uint32_t>(a.height));
  w.PutU32(static_cast<std::uint32_t>(a.width));
  w.PutTensor("channel_mean", Tensor({a.channels}, a.channel_mean));
  w.PutU32(3);
  PutSplit(w, "train", a.train);
  PutSplit(w, "validation", a.validation);
  PutSplit(w, "test", a.test);
  return w.Take();
}

DatasetArchive DecodeArchive(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw LoadError(LoadError::Code::kTruncated, "archive shorter than its magic");
  if (std::memcmp(bytes.data(), kArchiveMagic, 4) != 0) {
    throw LoadError(LoadError::Code::kBadMagic, "bad magic: not a GDDS dataset archive");
  }
  ByteReader r(bytes.subspan(4));
  const std::uint32_t version = r.GetU32();
  if (version != kArchiveVersion) {
    throw LoadError(LoadError::Code::kBadVersion, "unsupported archive version " + std::to_string(version));
  }
  DatasetArchive a;
  a.num_classes = static_cast<int>(r.GetU32());
  a.channels = static_cast<int>(r.GetU32());
  a.height = static_cast<int>(r.GetU32());
  a.width = static_cast<int>(r.GetU32());
  if (a.num_classes < 1 || a.num_classes > 256 || a.channels < 1 || a.channels > 64 ||
      a.height < 1 || a.height > 4096 || a.width < 1 || a.width > 4096) {
    throw LoadError(LoadError::Code::kDimMismatch, "archive header has implausible dimensions");
  }
  TensorRecord mean = r.GetTensor();
  if (mean.name != "channel_mean" || mean.tensor.dims() != std::vector<int>{a.channels}) {
    throw LoadError(LoadError::Code::kDimMismatch, "channel_mean record does not match header");
  }
  a.channel_mean.assign(mean.tensor.values().begin(), mean.tensor.values().end());
  const std::uint32_t splits = r.GetU32();
  if (splits != 3) throw LoadError(LoadError::Code::kBadRecord, "archive must hold 3 splits");
  a.train = GetSplit(r, "train", a);
  a.validation = GetSplit(r, "validation", a);
  a.test = GetSplit(r, "test", a);
  if (!r.done()) throw LoadError(LoadError::Code::kBadRecord, "trailing bytes after archive");
  return a;
}

void SaveArchive(const DatasetArchive& archive, const std::string& path) {
  WriteFileBytes(path, EncodeArchive(archive));
}

DatasetArchive LoadArchive(const std::string& path) { return DecodeArchive(ReadFileBytes(path)); }

}  // namespace gdnn
