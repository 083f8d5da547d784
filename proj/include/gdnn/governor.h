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

#ifndef GDNN_GOVERNOR_H_
#define GDNN_GOVERNOR_H_

#include <optional>
#include <string>
#include <vector>

#include "gdnn/profile.h"

namespace gdnn {

enum class Metric { kTime, kPower, kEnergy };

std::string MetricName(Metric m);
Metric ParseMetric(const std::string& s);  // time|power|energy (also time_ms, ...)

// Value of the metric at a point; power and energy may be absent.
std::optional<double> MetricValue(const OperatingPoint& p, Metric m);

struct Budget {
  Metric metric = Metric::kTime;
  double limit = 0.0;
};

// Which runtime knobs the governor may turn. A disabled knob pins its axis:
// config to the widest model in the profile, DVFS to each core's highest
// frequency, mapping to `base_core`.
struct KnobSet {
  bool config = true;
  bool dvfs = false;
  bool mapping = false;
  // platform/core id or bare core name; empty selects the first core listed
  // in the profile.
  std::string base_core;

  static KnobSet ConfigOnly() { return {true, false, false, ""}; }
  static KnobSet ConfigDvfs() { return {true, true, false, ""}; }
  static KnobSet ConfigDvfsMapping() { return {true, true, true, ""}; }
  // "config", "config+dvfs", "config+dvfs+map", or any '+'-joined subset of
  // {config, dvfs, map}.
  static KnobSet Parse(const std::string& text);
  std::string Label() const;
};

// Points reachable with the given knobs, in profile order.
std::vector<OperatingPoint> AllowedPoints(const PlatformProfile& profile, const KnobSet& knobs);

// Highest-accuracy allowed point within the budget; ties go to lower energy,
// then lower latency, then lower frequency (then core id and k, so the choice
// is total). Throws InfeasibleError carrying the minimum achievable value of
// the budget metric.
OperatingPoint SelectPoint(const PlatformProfile& profile, const Budget& budget,
                           const KnobSet& knobs = KnobSet::ConfigDvfsMapping());

// Points not dominated in (metric, -accuracy), ascending by metric. Points
// lacking the metric are ignored.
std::vector<OperatingPoint> ParetoFrontier(const PlatformProfile& profile, Metric metric);

// max/min of the metric over the allowed points.
double DynamicRange(const PlatformProfile& profile, Metric metric, const KnobSet& knobs);

}  // namespace gdnn

#endif  // GDNN_GOVERNOR_H_
