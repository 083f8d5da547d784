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

#ifndef GDNN_HOST_PROFILER_H_
#define GDNN_HOST_PROFILER_H_

#include <chrono>
#include <functional>
#include <map>
#include <vector>

#include "gdnn/dataset.h"
#include "gdnn/groupnet.h"
#include "gdnn/profile.h"

namespace gdnn {

struct HostLatency {
  int k = 0;
  double latency_ms = 0.0;  // median over repetitions of the per-repetition mean
  double mean_ms = 0.0;     // plain mean over all timed inferences
  double p95_ms = 0.0;
  std::vector<double> repetition_means_ms;
};

struct HostProfileOptions {
  int repetitions = 5;
  int warmup = 10;  // inferences per width, discarded
  // Injectable clock for tests; defaults to std::chrono::steady_clock.
  std::function<std::chrono::nanoseconds()> clock;
};

// Times single-image (batch 1) inference at every trained width on the
// calling thread. Widths are interleaved inside each repetition so drift hits
// all of them alike. Throws InputError for fewer than 3 repetitions or an
// empty sample, MeasurementError when the clock runs backwards.
std::vector<HostLatency> ProfileHost(const GroupModel& model, const Dataset& sample,
                                     const HostProfileOptions& options = {});

// Rows with platform "host", core "host", freq 0 and no power.
PlatformProfile HostProfileToPoints(const std::vector<HostLatency>& latencies,
                                    const std::map<int, double>& accuracy_by_k);

}  // namespace gdnn

#endif  // GDNN_HOST_PROFILER_H_
