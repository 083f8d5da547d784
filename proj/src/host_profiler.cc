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

#include "gdnn/host_profiler.h"

#include <algorithm>
#include <cmath>

#include "gdnn/errors.h"

namespace gdnn {

std::vector<HostLatency> ProfileHost(const GroupModel& model, const Dataset& sample,
                                     const HostProfileOptions& options) {
  if (options.repetitions < 3) {
    throw InputError("host profiling needs at least 3 repetitions, got " +
                     std::to_string(options.repetitions));
  }
  if (sample.empty()) throw InputError("host profiling needs a non-empty sample");
  if (model.trained_groups() < 1) throw StateError("host profiling needs a trained model");
  auto clock = options.clock ? options.clock : [] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now().time_since_epoch());
  };
  const int widths = model.trained_groups();
  std::vector<Tensor> images;
  for (std::size_t i = 0; i < sample.size(); ++i) images.push_back(sample.Image(i));

  volatile float sink = 0.0f;
  for (int k = 1; k <= widths; ++k) {
    for (int w = 0; w < options.warmup; ++w) sink = sink + Forward(model, images[w % images.size()], k).probs[0];
  }

  std::vector<HostLatency> out(widths);
  std::vector<std::vector<double>> all(widths);
  for (int rep = 0; rep < options.repetitions; ++rep) {
    for (int k = 1; k <= widths; ++k) {
      double sum = 0.0;
      for (const Tensor& image : images) {
        const auto t0 = clock();
        sink = sink + Forward(model, image, k).probs[0];
        const auto t1 = clock();
        if (t1 < t0) throw MeasurementError("clock went backwards during host profiling");
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        all[k - 1].push_back(ms);
        sum += ms;
      }
      out[k - 1].repetition_means_ms.push_back(sum / static_cast<double>(images.size()));
    }
  }
  for (int k = 1; k <= widths; ++k) {
    HostLatency& h = out[k - 1];
    h.k = k;
    std::vector<double> means = h.repetition_means_ms;
    std::sort(means.begin(), means.end());
    const std::size_t n = means.size();
    h.latency_ms = n % 2 ? means[n / 2] : 0.5 * (means[n / 2 - 1] + means[n / 2]);
    std::vector<double>& s = all[k - 1];
    double total = 0.0;
    for (double v : s) total += v;
    h.mean_ms = total / static_cast<double>(s.size());
    std::sort(s.begin(), s.end());
    const std::size_t idx = static_cast<std::size_t>(std::ceil(0.95 * s.size())) - 1;
    h.p95_ms = s[std::min(idx, s.size() - 1)];
    if (!(h.latency_ms > 0.0)) throw MeasurementError("host timer resolution too coarse (zero latency)");
  }
  return out;
}

PlatformProfile HostProfileToPoints(const std::vector<HostLatency>& latencies,
                                    const std::map<int, double>& accuracy_by_k) {
  PlatformProfile profile;
  profile.name = "host";
  for (const auto& h : latencies) {
    OperatingPoint p;
    p.platform = "host";
    p.core = "host";
    p.freq_hz = 0;
    p.config_k = h.k;
    p.latency_ms = h.latency_ms;
    auto it = accuracy_by_k.find(h.k);
    p.accuracy = it == accuracy_by_k.end() ? 0.0 : it->second;
    profile.points.push_back(p);
  }
  FinalizeProfile(profile);
  return profile;
}

}  // namespace gdnn
