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

#ifndef GDNN_RANDOM_H_
#define GDNN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gdnn {

// splitmix64 finalizer; used to derive independent stream seeds from tuples
// like (seed, step, repeat, tensor).
std::uint64_t MixSeed(std::initializer_list<std::uint64_t> parts);

// Thin wrapper around mt19937_64 that produces the same floats on every
// standard library (std::uniform_real_distribution does not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, 1) with 24 bits of mantissa.
  float Uniform() { return static_cast<float>(engine_() >> 40) * 0x1.0p-24f; }
  float Uniform(float lo, float hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);
  // Box-Muller standard normal.
  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace gdnn

#endif  // GDNN_RANDOM_H_
