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

#include "gdnn/governor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "gdnn/errors.h"

namespace gdnn {

std::string MetricName(Metric m) {
  switch (m) {
    case Metric::kTime: return "time";
    case Metric::kPower: return "power";
    case Metric::kEnergy: return "energy";
  }
  return "?";
}

Metric ParseMetric(const std::string& s) {
  if (s == "time" || s == "time_ms" || s == "latency") return Metric::kTime;
  if (s == "power" || s == "power_mw") return Metric::kPower;
  if (s == "energy" || s == "energy_mj") return Metric::kEnergy;
  throw ConfigError("unknown metric '" + s + "' (expected time, power or energy)");
}

std::optional<double> MetricValue(const OperatingPoint& p, Metric m) {
  switch (m) {
    case Metric::kTime: return p.latency_ms;
    case Metric::kPower: return p.power_mw;
    case Metric::kEnergy: return p.energy_mj;
  }
  return std::nullopt;
}

KnobSet KnobSet::Parse(const std::string& text) {
  KnobSet k{false, false, false, ""};
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, '+')) {
    if (part == "config") {
      k.config = true;
    } else if (part == "dvfs") {
      k.dvfs = true;
    } else if (part == "map" || part == "mapping") {
      k.mapping = true;
    } else {
      throw ConfigError("unknown knob '" + part + "' in '" + text + "'");
    }
  }
  return k;
}

std::string KnobSet::Label() const {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += "+";
    s += name;
  };
  add(config, "config");
  add(dvfs, "dvfs");
  add(mapping, "map");
  return s.empty() ? "none" : s;
}

std::vector<OperatingPoint> AllowedPoints(const PlatformProfile& profile, const KnobSet& knobs) {
  if (profile.points.empty()) throw InputError("empty profile");
  std::string base;
  if (!knobs.mapping) {
    if (knobs.base_core.empty()) {
      base = profile.points.front().CoreId();
    } else {
      for (const auto& p : profile.points) {
        if (p.CoreId() == knobs.base_core || p.core == knobs.base_core) {
          base = p.CoreId();
          break;
        }
      }
      if (base.empty()) throw ConfigError("core '" + knobs.base_core + "' not in profile");
    }
  }
  const int k_ref = profile.MaxConfig();
  std::map<std::string, std::int64_t> top_freq;
  for (const auto& p : profile.points) {
    auto [it, inserted] = top_freq.emplace(p.CoreId(), p.freq_hz);
    if (!inserted) it->second = std::max(it->second, p.freq_hz);
  }
  std::vector<OperatingPoint> out;
  for (const auto& p : profile.points) {
    if (!knobs.config && p.config_k != k_ref) continue;
    if (!knobs.dvfs && p.freq_hz != top_freq[p.CoreId()]) continue;
    if (!knobs.mapping && p.CoreId() != base) continue;
    out.push_back(p);
  }
  return out;
}

namespace {

auto RankKey(const OperatingPoint& p) {
  const double inf = std::numeric_limits<double>::infinity();
  return std::make_tuple(-p.accuracy, p.energy_mj.value_or(inf), p.latency_ms, p.freq_hz, p.CoreId(),
                         p.config_k);
}

}  // namespace

OperatingPoint SelectPoint(const PlatformProfile& profile, const Budget& budget, const KnobSet& knobs) {
  if (!(budget.limit > 0.0) || !std::isfinite(budget.limit)) {
    throw ConfigError("budget limit must be positive and finite");
  }
  const auto allowed = AllowedPoints(profile, knobs);
  const OperatingPoint* best = nullptr;
  double min_value = std::numeric_limits<double>::infinity();
  for (const auto& p : allowed) {
    const auto v = MetricValue(p, budget.metric);
    if (!v) continue;
    min_value = std::min(min_value, *v);
    if (*v > budget.limit) continue;
    if (!best || RankKey(p) < RankKey(*best)) best = &p;
  }
  if (!std::isfinite(min_value)) {
    throw InputError("no allowed point reports " + MetricName(budget.metric));
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no operating point meets " << MetricName(budget.metric) << " <= " << budget.limit
        << " (minimum achievable " << min_value << ")";
    throw InfeasibleError(min_value, msg.str());
  }
  return *best;
}

std::vector<OperatingPoint> ParetoFrontier(const PlatformProfile& profile, Metric metric) {
  struct Entry {
    double value;
    const OperatingPoint* p;
    std::size_t index;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < profile.points.size(); ++i) {
    if (auto v = MetricValue(profile.points[i], metric)) entries.push_back({*v, &profile.points[i], i});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.p->accuracy != b.p->accuracy) return a.p->accuracy > b.p->accuracy;
    return a.index < b.index;
  });
  // Sweep by ascending metric. A point survives when it is strictly more
  // accurate than everything cheaper, or exactly ties the best point seen so
  // far on both axes.
  std::vector<OperatingPoint> out;
  double best_acc = -std::numeric_limits<double>::infinity();
  double best_value = 0.0;
  for (const auto& e : entries) {
    if (e.p->accuracy > best_acc) {
      best_acc = e.p->accuracy;
      best_value = e.value;
      out.push_back(*e.p);
    } else if (e.p->accuracy == best_acc && e.value == best_value) {
      out.push_back(*e.p);
    }
  }
  return out;
}

double DynamicRange(const PlatformProfile& profile, Metric metric, const KnobSet& knobs) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& p : AllowedPoints(profile, knobs)) {
    if (auto v = MetricValue(p, metric)) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  if (!std::isfinite(lo)) {
    throw InputError("no allowed point reports " + MetricName(metric) + " for knobs " + knobs.Label());
  }
  return hi / lo;
}

}  // namespace gdnn
