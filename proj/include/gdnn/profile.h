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

#ifndef GDNN_PROFILE_H_
#define GDNN_PROFILE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gdnn {

// One (core, frequency, width) combination and what it costs.
struct OperatingPoint {
  std::string platform;
  std::string core;
  std::int64_t freq_hz = 0;
  int config_k = 1;
  double latency_ms = 0.0;
  std::optional<double> power_mw;
  double accuracy = 0.0;
  std::optional<double> energy_mj;  // latency_ms * power_mw / 1000

  // Cores are identified per platform.
  std::string CoreId() const { return platform + "/" + core; }
};

struct KnobAvailability {
  bool config = false;   // more than one width present
  bool dvfs = false;     // some core has more than one frequency
  bool mapping = false;  // more than one core
};

struct PlatformProfile {
  std::string name;
  std::vector<OperatingPoint> points;
  KnobAvailability knobs;

  int MaxConfig() const;
};

// Fills in energy and knob availability and checks the profile invariants:
// non-empty, (platform, core, freq, k) unique, latency and power positive,
// one accuracy per k. Throws ProfileParseError.
void FinalizeProfile(PlatformProfile& profile);

// CSV header: platform,core,freq_hz,config_pct,latency_ms,power_mw,accuracy
// config_pct = 100 * k / num_groups. power_mw and accuracy may be empty; an
// empty accuracy is taken from `accuracy_by_k` when given, otherwise it is a
// parse error.
PlatformProfile ParseProfileCsv(const std::string& text, const std::string& name = "profile",
                                const std::map<int, double>& accuracy_by_k = {},
                                int num_groups = 4);
PlatformProfile LoadProfile(const std::string& path, const std::map<int, double>& accuracy_by_k = {},
                            int num_groups = 4);

std::string ProfileToCsv(const PlatformProfile& profile, int num_groups = 4);
void SaveProfile(const PlatformProfile& profile, const std::string& path, int num_groups = 4);

// Shortest decimal that parses back to the same double.
std::string FormatNumber(double v);

}  // namespace gdnn

#endif  // GDNN_PROFILE_H_
