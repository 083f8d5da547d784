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

#include "gdnn/profile.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "gdnn/errors.h"

namespace gdnn {
namespace {

using Code = ProfileParseError::Code;

constexpr const char* kHeader = "platform,core,freq_hz,config_pct,latency_ms,power_mw,accuracy";

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double ParseDouble(const std::string& s, int line, const char* field) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ProfileParseError(Code::kBadField, line, std::string("bad ") + field + " '" + s + "'");
  }
  return v;
}

std::int64_t ParseInt(const std::string& s, int line, const char* field) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ProfileParseError(Code::kBadField, line, std::string("bad ") + field + " '" + s + "'");
  }
  return v;
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int PlatformProfile::MaxConfig() const {
  int k = 0;
  for (const auto& p : points) k = std::max(k, p.config_k);
  return k;
}

void FinalizeProfile(PlatformProfile& profile) {
  if (profile.points.empty()) throw ProfileParseError(Code::kEmpty, 0, "profile has no points");
  std::set<std::tuple<std::string, std::string, std::int64_t, int>> seen;
  std::map<int, double> acc_by_k;
  std::set<std::string> cores;
  std::set<int> configs;
  std::map<std::string, std::set<std::int64_t>> freqs;
  int line = 1;
  for (auto& p : profile.points) {
    ++line;
    if (!seen.insert({p.platform, p.core, p.freq_hz, p.config_k}).second) {
      throw ProfileParseError(Code::kDuplicatePoint, line,
                              "duplicate point " + p.CoreId() + " @" + std::to_string(p.freq_hz) +
                                  " k=" + std::to_string(p.config_k));
    }
    if (!(p.latency_ms > 0.0)) throw ProfileParseError(Code::kNonPositive, line, "latency must be > 0");
    if (p.power_mw && !(*p.power_mw > 0.0)) {
      throw ProfileParseError(Code::kNonPositive, line, "power must be > 0");
    }
    if (!(p.accuracy >= 0.0 && p.accuracy <= 1.0)) {
      throw ProfileParseError(Code::kBadField, line, "accuracy must lie in [0, 1]");
    }
    auto [it, inserted] = acc_by_k.emplace(p.config_k, p.accuracy);
    if (!inserted && it->second != p.accuracy) {
      throw ProfileParseError(Code::kInconsistentAccuracy, line,
                              "accuracy for k=" + std::to_string(p.config_k) +
                                  " differs from an earlier point");
    }
    p.energy_mj = p.power_mw ? std::optional<double>(p.latency_ms * *p.power_mw / 1000.0) : std::nullopt;
    cores.insert(p.CoreId());
    configs.insert(p.config_k);
    freqs[p.CoreId()].insert(p.freq_hz);
  }
  profile.knobs.config = configs.size() > 1;
  profile.knobs.mapping = cores.size() > 1;
  profile.knobs.dvfs = false;
  for (const auto& [core, fs] : freqs) profile.knobs.dvfs |= fs.size() > 1;
}

PlatformProfile ParseProfileCsv(const std::string& text, const std::string& name,
                                const std::map<int, double>& accuracy_by_k, int num_groups) {
  PlatformProfile profile;
  profile.name = name;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != kHeader) {
        throw ProfileParseError(Code::kBadHeader, line_no, std::string("expected header '") + kHeader + "'");
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 7) {
      throw ProfileParseError(Code::kBadField, line_no, "expected 7 fields, got " + std::to_string(f.size()));
    }
    OperatingPoint p;
    p.platform = f[0];
    p.core = f[1];
    p.freq_hz = ParseInt(f[2], line_no, "freq_hz");
    const std::int64_t pct = ParseInt(f[3], line_no, "config_pct");
    if (pct <= 0 || pct > 100 || (pct * num_groups) % 100 != 0) {
      throw ProfileParseError(Code::kBadField, line_no,
                              "config_pct " + f[3] + " is not a multiple of 100/" + std::to_string(num_groups));
    }
    p.config_k = static_cast<int>(pct * num_groups / 100);
    p.latency_ms = ParseDouble(f[4], line_no, "latency_ms");
    if (!(p.latency_ms > 0.0)) throw ProfileParseError(Code::kNonPositive, line_no, "latency must be > 0");
    if (!f[5].empty()) {
      p.power_mw = ParseDouble(f[5], line_no, "power_mw");
      if (!(*p.power_mw > 0.0)) throw ProfileParseError(Code::kNonPositive, line_no, "power must be > 0");
    }
    if (!f[6].empty()) {
      p.accuracy = ParseDouble(f[6], line_no, "accuracy");
    } else if (auto it = accuracy_by_k.find(p.config_k); it != accuracy_by_k.end()) {
      p.accuracy = it->second;
    } else {
      throw ProfileParseError(Code::kMissingAccuracy, line_no,
                              "no accuracy for k=" + std::to_string(p.config_k) + " and no model supplied");
    }
    profile.points.push_back(std::move(p));
  }
  if (!header) throw ProfileParseError(Code::kBadHeader, 1, "empty profile file");
  FinalizeProfile(profile);
  return profile;
}

PlatformProfile LoadProfile(const std::string& path, const std::map<int, double>& accuracy_by_k,
                            int num_groups) {
  std::ifstream in(path);
  if (!in) throw ProfileParseError(Code::kIo, 0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseProfileCsv(buf.str(), path, accuracy_by_k, num_groups);
}

std::string ProfileToCsv(const PlatformProfile& profile, int num_groups) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& p : profile.points) {
    out << p.platform << ',' << p.core << ',' << p.freq_hz << ',' << (100 * p.config_k / num_groups) << ','
        << FormatNumber(p.latency_ms) << ',' << (p.power_mw ? FormatNumber(*p.power_mw) : "") << ','
        << FormatNumber(p.accuracy) << '\n';
  }
  return out.str();
}

void SaveProfile(const PlatformProfile& profile, const std::string& path, int num_groups) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ProfileParseError(Code::kIo, 0, "cannot write " + path);
  out << ProfileToCsv(profile, num_groups);
}

}  // namespace gdnn
