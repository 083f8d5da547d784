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

#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gdnn/errors.h"
#include "gdnn/governor.h"
#include "gdnn/groupnet.h"
#include "gdnn/host_profiler.h"
#include "gdnn/profile.h"
#include "gdnn/random.h"
#include "governor_oracle.h"

#ifndef GDNN_DATA_DIR
#error "GDNN_DATA_DIR must point at the shipped profile fixtures"
#endif

namespace gdnn {
namespace {

const std::string kDataDir = GDNN_DATA_DIR;
const std::string kHeader = "platform,core,freq_hz,config_pct,latency_ms,power_mw,accuracy\n";

ProfileParseError::Code ParseCode(const std::string& text, const std::map<int, double>& acc = {}) {
  try {
    ParseProfileCsv(text, "t", acc);
  } catch (const ProfileParseError& e) {
    return e.code();
  }
  ADD_FAILURE() << "parse unexpectedly succeeded:\n" << text;
  return ProfileParseError::Code::kIo;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::map<int, double> XuAccuracy() { return {{1, 0.55}, {2, 0.63}, {3, 0.68}, {4, 0.712}}; }

// ---- profile parsing ----------------------------------------------------------

TEST(ProfileTest, Table1FixtureLoads) {
  PlatformProfile p = LoadProfile(kDataDir + "/table1.csv");
  ASSERT_EQ(p.points.size(), 8u);
  EXPECT_EQ(p.points[1].core, "GPU");
  EXPECT_EQ(p.points[1].freq_hz, 921000000);
  EXPECT_DOUBLE_EQ(p.points[1].latency_ms, 4.88);
  EXPECT_EQ(p.points[1].config_k, 4);
  EXPECT_DOUBLE_EQ(p.points[1].accuracy, 0.712);
  EXPECT_FALSE(p.points[1].power_mw.has_value());
  EXPECT_FALSE(p.knobs.config);
  EXPECT_TRUE(p.knobs.dvfs);
  EXPECT_TRUE(p.knobs.mapping);
}

TEST(ProfileTest, SyntheticXu3FixtureLoadsWithSuppliedAccuracy) {
  EXPECT_EQ(ParseCode(ReadText(kDataDir + "/synthetic_xu3.csv")), ProfileParseError::Code::kMissingAccuracy);
  PlatformProfile p = LoadProfile(kDataDir + "/synthetic_xu3.csv", XuAccuracy());
  EXPECT_EQ(p.points.size(), (17u + 12u) * 4u);
  int a15 = 0, a7 = 0;
  for (const auto& pt : p.points) {
    if (pt.config_k != 4) continue;
    (pt.core == "A15" ? a15 : a7)++;
  }
  EXPECT_EQ(a15, 17);
  EXPECT_EQ(a7, 12);
  for (const auto& pt : p.points) {
    ASSERT_TRUE(pt.energy_mj.has_value());
    EXPECT_NEAR(*pt.energy_mj, pt.latency_ms * *pt.power_mw / 1000.0, 1e-6 * *pt.energy_mj);
  }
  EXPECT_TRUE(p.knobs.config && p.knobs.dvfs && p.knobs.mapping);
}

TEST(ProfileTest, SingleRowIsValid) {
  PlatformProfile p = ParseProfileCsv(kHeader + "x,c,1000,100,2.5,300,0.5\n");
  ASSERT_EQ(p.points.size(), 1u);
  EXPECT_DOUBLE_EQ(*p.points[0].energy_mj, 0.75);
  EXPECT_DOUBLE_EQ(DynamicRange(p, Metric::kTime, KnobSet::ConfigDvfsMapping()), 1.0);
}

TEST(ProfileTest, ConfigPctMapsToWidth) {
  PlatformProfile p = ParseProfileCsv(kHeader + "x,c,1,25,1,,0.1\nx,c,1,50,2,,0.2\nx,c,1,75,3,,0.3\n");
  EXPECT_EQ(p.points[0].config_k, 1);
  EXPECT_EQ(p.points[2].config_k, 3);
  EXPECT_EQ(p.MaxConfig(), 3);
}

TEST(ProfileTest, DistinctParseErrors) {
  using C = ProfileParseError::Code;
  EXPECT_EQ(ParseCode("platform,core,freq,config_pct,latency_ms,power_mw,accuracy\n"), C::kBadHeader);
  EXPECT_EQ(ParseCode(kHeader), C::kEmpty);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,2,0,0.5\n"), C::kNonPositive);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,-1,,0.5\n"), C::kNonPositive);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,2,,0.5\nx,c,1,100,3,,0.5\n"), C::kDuplicatePoint);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,2,,0.5\nx,c,2,100,3,,0.6\n"), C::kInconsistentAccuracy);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,2,,\n"), C::kMissingAccuracy);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,abc,,0.5\n"), C::kBadField);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,33,2,,0.5\n"), C::kBadField);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,2\n"), C::kBadField);
  EXPECT_EQ(ParseCode(kHeader + "x,c,1,100,2,,1.5\n"), C::kBadField);
}

TEST(ProfileTest, ParseErrorCarriesLine) {
  try {
    ParseProfileCsv(kHeader + "x,c,1,100,2,,0.5\nx,c,2,100,0,,0.5\n");
    FAIL();
  } catch (const ProfileParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ProfileTest, CsvRoundTrip) {
  PlatformProfile p = LoadProfile(kDataDir + "/synthetic_xu3.csv", XuAccuracy());
  const std::string csv = ProfileToCsv(p);
  PlatformProfile back = ParseProfileCsv(csv);
  ASSERT_EQ(back.points.size(), p.points.size());
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    EXPECT_EQ(back.points[i].latency_ms, p.points[i].latency_ms);
    EXPECT_EQ(back.points[i].power_mw, p.points[i].power_mw);
    EXPECT_EQ(back.points[i].accuracy, p.points[i].accuracy);
  }
  EXPECT_EQ(ProfileToCsv(back), csv);
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(1020.0), "1020");
}

// ---- selection ------------------------------------------------------------------

TEST(SelectPointTest, Table1ThirtyThreeMsPicksGpuAtFullWidth) {
  PlatformProfile p = LoadProfile(kDataDir + "/table1.csv");
  OperatingPoint pt = SelectPoint(p, {Metric::kTime, 33.0}, KnobSet::ConfigDvfsMapping());
  EXPECT_EQ(pt.core, "GPU");
  EXPECT_EQ(pt.config_k, 4);
  EXPECT_LE(pt.latency_ms, 33.0);
}

TEST(SelectPointTest, BudgetBelowMinimumIsInfeasibleWithMinimum) {
  PlatformProfile p = LoadProfile(kDataDir + "/table1.csv");
  try {
    SelectPoint(p, {Metric::kTime, 1.0}, KnobSet::ConfigDvfsMapping());
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_DOUBLE_EQ(e.min_achievable(), 4.88);
  }
}

TEST(SelectPointTest, EqualAccuracyPrefersLowerEnergy) {
  PlatformProfile p = ParseProfileCsv(kHeader +
                                      "b,big,2000,100,10,500,0.7\n"     // 5 mJ
                                      "b,little,1000,100,20,100,0.7\n"  // 2 mJ
                                      "b,little,1000,50,8,100,0.6\n");
  OperatingPoint pt = SelectPoint(p, {Metric::kTime, 25.0}, KnobSet::ConfigDvfsMapping());
  EXPECT_EQ(pt.core, "little");
  EXPECT_EQ(pt.config_k, 4);
  auto oracle = testing::OracleSelect(p, {Metric::kTime, 25.0}, KnobSet::ConfigDvfsMapping());
  EXPECT_EQ(oracle.point->core, "little");
}

TEST(SelectPointTest, MissingMetricIsInputError) {
  PlatformProfile p = LoadProfile(kDataDir + "/table1.csv");
  EXPECT_THROW(SelectPoint(p, {Metric::kPower, 1000.0}), InputError);
}

TEST(SelectPointTest, AgreesWithExhaustiveEnumeration) {
  Rng rng(2024);
  int feasible = 0;
  for (int c = 0; c < 300; ++c) {
    PlatformProfile prof = testing::RandomProfile(rng);
    const KnobSet knobs = testing::RandomKnobs(rng, prof);
    const Metric metric = static_cast<Metric>(rng.Below(3));
    const Budget budget{metric, rng.Uniform(0.5f, 60.0f) * (metric == Metric::kTime ? 1.0 : 100.0)};
    const auto want = testing::OracleSelect(prof, budget, knobs);
    if (std::isinf(want.min_achievable)) {
      EXPECT_THROW(SelectPoint(prof, budget, knobs), InputError) << c;
    } else if (!want.point) {
      try {
        SelectPoint(prof, budget, knobs);
        ADD_FAILURE() << "case " << c << " should be infeasible";
      } catch (const InfeasibleError& e) {
        EXPECT_DOUBLE_EQ(e.min_achievable(), want.min_achievable) << c;
      }
    } else {
      ++feasible;
      OperatingPoint got = SelectPoint(prof, budget, knobs);
      EXPECT_EQ(got.CoreId(), want.point->CoreId()) << c;
      EXPECT_EQ(got.freq_hz, want.point->freq_hz) << c;
      EXPECT_EQ(got.config_k, want.point->config_k) << c;
      EXPECT_LE(*MetricValue(got, metric), budget.limit);
    }
  }
  EXPECT_GT(feasible, 100);
}

TEST(SelectPointTest, RelaxingBudgetNeverLowersAccuracy) {
  Rng rng(77);
  for (int c = 0; c < 100; ++c) {
    PlatformProfile prof = testing::RandomProfile(rng);
    const KnobSet knobs = testing::RandomKnobs(rng, prof);
    double prev = -1.0;
    for (double limit = 0.5; limit < 200.0; limit *= 1.5) {
      try {
        const double acc = SelectPoint(prof, {Metric::kTime, limit}, knobs).accuracy;
        EXPECT_GE(acc, prev) << c << " at " << limit;
        prev = acc;
      } catch (const InfeasibleError&) {
        EXPECT_LT(prev, 0.0) << "became infeasible after a feasible limit";
      }
    }
  }
}

TEST(KnobSetTest, ParseAndLabel) {
  KnobSet k = KnobSet::Parse("config+dvfs+map");
  EXPECT_TRUE(k.config && k.dvfs && k.mapping);
  EXPECT_EQ(KnobSet::Parse("config").Label(), "config");
  EXPECT_EQ(KnobSet::Parse("config+dvfs").Label(), "config+dvfs");
  EXPECT_THROW(KnobSet::Parse("config+turbo"), ConfigError);
  EXPECT_EQ(ParseMetric("energy"), Metric::kEnergy);
  EXPECT_THROW(ParseMetric("speed"), ConfigError);
}

TEST(KnobSetTest, PinningFollowsDisabledKnobs) {
  PlatformProfile p = LoadProfile(kDataDir + "/synthetic_xu3.csv", XuAccuracy());
  auto config_only = AllowedPoints(p, KnobSet::ConfigOnly());
  ASSERT_EQ(config_only.size(), 4u);
  for (const auto& pt : config_only) {
    EXPECT_EQ(pt.core, "A15");
    EXPECT_EQ(pt.freq_hz, 1800000000);
  }
  EXPECT_EQ(AllowedPoints(p, KnobSet::ConfigDvfs()).size(), 17u * 4u);
  EXPECT_EQ(AllowedPoints(p, KnobSet::ConfigDvfsMapping()).size(), 29u * 4u);
  KnobSet little = KnobSet::ConfigOnly();
  little.base_core = "A7";
  for (const auto& pt : AllowedPoints(p, little)) EXPECT_EQ(pt.freq_hz, 1300000000);
}

// ---- pareto and dynamic range -------------------------------------------------------

TEST(ParetoTest, DominatedPointDropped) {
  // Accuracy is fixed per width, so the two points sit at different widths.
  PlatformProfile p = ParseProfileCsv(kHeader + "x,a,1,50,10,,0.5\nx,a,1,100,5,,0.6\n");
  auto f = ParetoFrontier(p, Metric::kTime);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_DOUBLE_EQ(f[0].latency_ms, 5.0);
}

TEST(ParetoTest, EqualAccuracyKeepsMinimum) {
  PlatformProfile p = LoadProfile(kDataDir + "/table1.csv");
  auto f = ParetoFrontier(p, Metric::kTime);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_DOUBLE_EQ(f[0].latency_ms, 4.88);
}

TEST(ParetoTest, MatchesBruteForceOnRandomProfiles) {
  Rng rng(31);
  for (int c = 0; c < 200; ++c) {
    PlatformProfile prof = testing::RandomProfile(rng);
    for (Metric m : {Metric::kTime, Metric::kPower, Metric::kEnergy}) {
      auto got = ParetoFrontier(prof, m);
      auto want = testing::OracleFrontier(prof, m);
      ASSERT_EQ(got.size(), want.size()) << c;
      for (std::size_t i = 0; i < got.size(); ++i) {
        if (i > 0) {
          EXPECT_LE(*MetricValue(got[i - 1], m), *MetricValue(got[i], m));
        }
        bool found = false;
        for (const auto& w : want) {
          found |= w.CoreId() == got[i].CoreId() && w.freq_hz == got[i].freq_hz && w.config_k == got[i].config_k;
        }
        EXPECT_TRUE(found) << c;
      }
    }
  }
}

TEST(DynamicRangeTest, Table1A15DvfsOnly) {
  PlatformProfile p = LoadProfile(kDataDir + "/table1.csv");
  KnobSet dvfs{false, true, false, "OdroidXU3/A15"};
  EXPECT_NEAR(DynamicRange(p, Metric::kTime, dvfs), 1020.0 / 117.0, 1e-6);
}

TEST(DynamicRangeTest, ConfigOnlyOnLinearProfileIsFour) {
  PlatformProfile p = LoadProfile(kDataDir + "/synthetic_xu3.csv", XuAccuracy());
  EXPECT_DOUBLE_EQ(DynamicRange(p, Metric::kTime, KnobSet::ConfigOnly()), 4.0);
}

TEST(DynamicRangeTest, WidensAsKnobsAreAdded) {
  PlatformProfile p = LoadProfile(kDataDir + "/synthetic_xu3.csv", XuAccuracy());
  for (Metric m : {Metric::kTime, Metric::kPower, Metric::kEnergy}) {
    const double a = DynamicRange(p, m, KnobSet::ConfigOnly());
    const double b = DynamicRange(p, m, KnobSet::ConfigDvfs());
    const double c = DynamicRange(p, m, KnobSet::ConfigDvfsMapping());
    EXPECT_LE(a, b) << MetricName(m);
    EXPECT_LE(b, c) << MetricName(m);
  }
}

TEST(DynamicRangeTest, MonotoneInKnobSetsOnRandomProfiles) {
  Rng rng(5);
  for (int c = 0; c < 200; ++c) {
    PlatformProfile prof = testing::RandomProfile(rng);
    const Metric m = Metric::kTime;
    // Every subset relation among the eight knob sets, base core fixed.
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        if ((a & b) != a) continue;
        KnobSet ka{(a & 1) != 0, (a & 2) != 0, (a & 4) != 0, ""};
        KnobSet kb{(b & 1) != 0, (b & 2) != 0, (b & 4) != 0, ""};
        EXPECT_LE(DynamicRange(prof, m, ka), DynamicRange(prof, m, kb) * (1 + 1e-12)) << c;
        EXPECT_DOUBLE_EQ(DynamicRange(prof, m, kb), testing::OracleRange(prof, m, kb));
      }
    }
  }
}

// ---- host profiler ----------------------------------------------------------------

GroupModel TinyTrainedModel() {
  GroupNetArch a;
  a.num_groups = 2;
  a.channels_per_group = 2;
  a.input_height = a.input_width = 12;
  a.num_classes = 2;
  GroupModel m = BuildModel(a);
  m.set_trained_groups(2);
  return m;
}

Dataset TinySample() {
  Dataset d(3, 12, 12, 2);
  d.Add(std::vector<float>(3 * 12 * 12, 0.1f), 0, 0);
  return d;
}

TEST(HostProfilerTest, TooFewRepetitionsIsInputError) {
  HostProfileOptions o;
  o.repetitions = 2;
  EXPECT_THROW(ProfileHost(TinyTrainedModel(), TinySample(), o), InputError);
  o.repetitions = 3;
  o.warmup = 1;
  EXPECT_NO_THROW(ProfileHost(TinyTrainedModel(), TinySample(), o));
}

TEST(HostProfilerTest, BackwardsClockIsMeasurementError) {
  HostProfileOptions o;
  o.repetitions = 3;
  o.warmup = 0;
  std::int64_t t = 1000000;
  o.clock = [&t] { return std::chrono::nanoseconds(t -= 10); };
  EXPECT_THROW(ProfileHost(TinyTrainedModel(), TinySample(), o), MeasurementError);
}

TEST(HostProfilerTest, FakeClockGivesExactStatistics) {
  HostProfileOptions o;
  o.repetitions = 3;
  o.warmup = 0;
  std::int64_t t = 0;
  o.clock = [&t] { return std::chrono::nanoseconds(t += 500000); };  // 0.5 ms per tick
  auto lat = ProfileHost(TinyTrainedModel(), TinySample(), o);
  ASSERT_EQ(lat.size(), 2u);
  for (const auto& l : lat) {
    EXPECT_DOUBLE_EQ(l.latency_ms, 0.5);
    EXPECT_EQ(l.repetition_means_ms.size(), 3u);
  }
  PlatformProfile prof = HostProfileToPoints(lat, {{1, 0.6}, {2, 0.7}});
  ASSERT_EQ(prof.points.size(), 2u);
  EXPECT_EQ(prof.points[0].core, "host");
  EXPECT_EQ(prof.points[1].config_k, 2);
  EXPECT_FALSE(prof.points[0].power_mw.has_value());
}

}  // namespace
}  // namespace gdnn
