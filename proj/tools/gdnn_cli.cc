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

// gdnn: dataset preparation, incremental training, evaluation, host
// profiling, budget-driven operating-point selection and report emission.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage or bad input,
// 3 ingestion / file format, 4 configuration or state, 5 budget infeasible,
// 6 unreliable measurement.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gdnn/checkpoint.h"
#include "gdnn/dataset.h"
#include "gdnn/errors.h"
#include "gdnn/evaluation.h"
#include "gdnn/governor.h"
#include "gdnn/groupnet.h"
#include "gdnn/host_profiler.h"
#include "gdnn/profile.h"
#include "gdnn/trainer.h"
#include "json.hpp"
#include "manifest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gdnn::tools {
namespace {

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kFormat = 3, kState = 4, kInfeasible = 5, kMeasurement = 6 };

// Raised for command-level usage problems found after flag parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

void RequireFile(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " not found: " + path);
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(LoadError::Code::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw LoadError(LoadError::Code::kIo, "cannot write " + path);
  out << text;
}

std::string ManifestPath(const std::string& flag, const std::string& fallback) {
  return flag.empty() ? fallback : flag;
}

int ConfigToK(const std::string& text, int groups) {
  int pct = 0;
  try {
    pct = std::stoi(text);
  } catch (const std::exception&) {
    throw UsageError("--config must be 25, 50, 75, 100 or all, got '" + text + "'");
  }
  if (pct <= 0 || (pct * groups) % 100 != 0 || pct > 100) {
    throw UsageError("--config " + text + " does not select a whole number of groups");
  }
  return pct * groups / 100;
}

const Dataset& SelectSplit(const DatasetArchive& a, const std::string& split) {
  if (split == "train") return a.train;
  if (split == "validation") return a.validation;
  if (split == "test") return a.test;
  throw UsageError("--split must be train, validation or test");
}

// ---- plan / arch json ---------------------------------------------------------

template <typename T>
void Take(const json& j, const char* key, T& dst, std::vector<std::string>& seen) {
  if (j.contains(key)) {
    dst = j.at(key).get<T>();
    seen.push_back(key);
  }
}

void CheckKeys(const json& j, const std::vector<std::string>& seen, const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
      throw ConfigError("unknown " + what + " key '" + key + "'");
    }
  }
}

TrainPlan PlanFromJson(const json& j) {
  TrainPlan p;
  std::vector<std::string> seen;
  try {
    Take(j, "epochs_per_step", p.epochs_per_step, seen);
    Take(j, "batch_size", p.batch_size, seen);
    Take(j, "base_lr", p.base_lr, seen);
    Take(j, "momentum", p.momentum, seen);
    Take(j, "fc_lr_decay", p.fc_lr_decay, seen);
    Take(j, "target_improvement", p.target_improvement, seen);
    Take(j, "max_repeats", p.max_repeats, seen);
    Take(j, "rng_seed", p.rng_seed, seen);
    Take(j, "lr_step_epochs", p.lr_step_epochs, seen);
    Take(j, "lr_gamma", p.lr_gamma, seen);
    if (j.contains("conv_init")) {
      const std::string init = j.at("conv_init").get<std::string>();
      if (init == "glorot") {
        p.conv_init = ConvInit::kGlorotUniform;
      } else if (init == "he") {
        p.conv_init = ConvInit::kHeUniform;
      } else {
        throw ConfigError("plan: conv_init must be glorot or he, got '" + init + "'");
      }
      seen.push_back("conv_init");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("plan: ") + e.what());
  }
  CheckKeys(j, seen, "plan");
  return p;
}

// Shortest decimal that round-trips through float, so 0.01f prints as 0.01.
double Tidy(float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7g", static_cast<double>(v));
  return std::strtod(buf, nullptr);
}

json PlanToJson(const TrainPlan& p) {
  return {{"epochs_per_step", p.epochs_per_step}, {"batch_size", p.batch_size},
          {"base_lr", Tidy(p.base_lr)},                 {"momentum", Tidy(p.momentum)},
          {"fc_lr_decay", Tidy(p.fc_lr_decay)},         {"target_improvement", p.target_improvement},
          {"max_repeats", p.max_repeats},         {"rng_seed", p.rng_seed},
          {"lr_step_epochs", p.lr_step_epochs},   {"lr_gamma", Tidy(p.lr_gamma)},
          {"conv_init", p.conv_init == ConvInit::kHeUniform ? "he" : "glorot"}};
}

GroupNetArch ArchFromJson(const json& j, GroupNetArch a) {
  std::vector<std::string> seen;
  try {
    Take(j, "num_groups", a.num_groups, seen);
    Take(j, "channels_per_group", a.channels_per_group, seen);
    Take(j, "num_classes", a.num_classes, seen);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("arch: ") + e.what());
  }
  CheckKeys(j, seen, "arch");
  a.Validate();
  return a;
}

json ArchToJson(const GroupNetArch& a) {
  return {{"num_groups", a.num_groups},
          {"channels_per_group", a.channels_per_group},
          {"num_classes", a.num_classes},
          {"input", {a.input_channels, a.input_height, a.input_width}}};
}

json LoadJsonFile(const std::string& path) {
  RequireFile(path, "json file");
  try {
    return json::parse(ReadText(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---- prepare-data -----------------------------------------------------------------

struct PrepareArgs {
  std::string cifar_dir;
  int synthetic = 0;
  std::string synthetic_kind = "motifs";
  int classes = 10;
  std::uint64_t seed = 1;
  int val_count = -1;
  int test_count = -1;
  int limit = 0;
  std::string out;
  std::string manifest;
};

int CmdPrepare(const PrepareArgs& a) {
  if (a.cifar_dir.empty() == (a.synthetic == 0)) {
    throw UsageError("give exactly one of --cifar-dir or --synthetic N");
  }
  RunManifest m("prepare-data");
  std::vector<Cifar10Record> pool, test;
  int classes = a.classes;
  int val = a.val_count;
  if (!a.cifar_dir.empty()) {
    if (!fs::is_directory(a.cifar_dir)) throw UsageError("--cifar-dir not found: " + a.cifar_dir);
    Cifar10Files files = LoadCifar10Dir(a.cifar_dir);
    for (int b = 1; b <= 5; ++b) m.AddInput((fs::path(a.cifar_dir) / ("data_batch_" + std::to_string(b) + ".bin")).string());
    m.AddInput((fs::path(a.cifar_dir) / "test_batch.bin").string());
    pool = std::move(files.train);
    test = std::move(files.test);
    classes = 10;
    if (a.limit > 0 && static_cast<std::size_t>(a.limit) < pool.size()) pool.resize(a.limit);
    if (a.test_count >= 0 && static_cast<std::size_t>(a.test_count) < test.size()) test.resize(a.test_count);
    if (val < 0) val = std::min<int>(5000, static_cast<int>(pool.size()) / 5);
    m.SetConfig("source", "cifar10");
    m.SetConfig("cifar_dir", a.cifar_dir);
  } else {
    if (a.synthetic < 2) throw UsageError("--synthetic needs at least 2 samples");
    SyntheticSpec spec;
    if (a.synthetic_kind == "blobs") {
      spec.kind = SyntheticKind::kBlobs;
    } else if (a.synthetic_kind != "motifs") {
      throw UsageError("--synthetic-kind must be motifs or blobs");
    }
    pool = GenerateSynthetic(a.synthetic, classes, a.seed, 1, spec);
    test = GenerateSynthetic(a.test_count >= 0 ? a.test_count : a.synthetic / 5, classes, a.seed, 2, spec);
    m.SetConfig("synthetic_kind", a.synthetic_kind);
    if (val < 0) val = a.synthetic / 5;
    m.SetConfig("source", "synthetic");
    m.SetConfig("samples", a.synthetic);
    m.AddSeed("synthetic", a.seed);
  }
  DatasetArchive archive = BuildArchive(pool, test, static_cast<std::size_t>(val), classes);
  SaveArchive(archive, a.out);
  m.SetConfig("classes", classes);
  m.SetConfig("validation", val);
  m.SetConfig("splits", {{"train", archive.train.size()},
                         {"validation", archive.validation.size()},
                         {"test", archive.test.size()}});
  m.AddOutput(a.out);
  m.Write(ManifestPath(a.manifest, a.out + ".manifest.json"));
  std::cout << "wrote " << a.out << ": train " << archive.train.size() << ", validation "
            << archive.validation.size() << ", test " << archive.test.size() << "\n";
  return kOk;
}

// ---- train ----------------------------------------------------------------------

struct TrainArgs {
  std::string data, plan, arch, out_dir, manifest;
  int epochs = 0;
  std::optional<std::uint64_t> seed;
  bool keep_checkpoints = true;
  bool quiet = false;
};

int CmdTrain(const TrainArgs& a) {
  RequireFile(a.data, "--data");
  RunManifest m("train");
  DatasetArchive archive = LoadArchive(a.data);
  m.AddInput(a.data);
  TrainPlan plan;
  if (!a.plan.empty()) {
    plan = PlanFromJson(LoadJsonFile(a.plan));
    m.AddInput(a.plan);
  }
  if (a.epochs > 0) plan.epochs_per_step = a.epochs;
  if (a.seed) plan.rng_seed = *a.seed;
  plan.Validate();
  GroupNetArch arch;
  arch.num_classes = archive.num_classes;
  arch.input_channels = archive.channels;
  arch.input_height = archive.height;
  arch.input_width = archive.width;
  if (!a.arch.empty()) {
    arch = ArchFromJson(LoadJsonFile(a.arch), arch);
    m.AddInput(a.arch);
  }
  arch.Validate();

  fs::create_directories(a.out_dir);
  TrainOutput output;
  if (a.keep_checkpoints) {
    output.checkpoint_dir = (fs::path(a.out_dir) / "checkpoints").string();
    fs::create_directories(output.checkpoint_dir);
  }
  if (!a.quiet) output.log = [](const std::string& line) { std::cerr << line << "\n"; };
  TrainingResult result = RunFullTraining(arch, archive.train, archive.validation, plan, archive.channel_mean, output);

  const std::string model_path = (fs::path(a.out_dir) / "model.gdnn").string();
  SaveCheckpoint(result.model, model_path);
  m.AddOutput(model_path);
  for (std::size_t s = 0; s < result.step_models.size(); ++s) {
    const std::string p = (fs::path(a.out_dir) / ("step" + std::to_string(s + 1) + ".gdnn")).string();
    SaveCheckpoint(result.step_models[s], p);
    m.AddOutput(p);
  }
  const std::string csv_path = (fs::path(a.out_dir) / "steps.csv").string();
  WriteText(csv_path, StepReportsCsv(result.reports));
  m.AddOutput(csv_path);
  json warnings = json::array();
  for (const auto& r : result.reports) {
    if (!r.warning.empty()) {
      warnings.push_back(r.warning);
      std::cerr << "warning: " << r.warning << "\n";
    }
  }
  m.SetConfig("plan", PlanToJson(plan));
  m.SetConfig("arch", ArchToJson(arch));
  m.SetConfig("warnings", warnings);
  m.SetConfig("checkpoint_dir", output.checkpoint_dir);
  m.AddSeed("plan", plan.rng_seed);
  m.Write(ManifestPath(a.manifest, (fs::path(a.out_dir) / "manifest.json").string()));
  for (const auto& r : result.reports) {
    std::cout << "step " << r.step << ": epoch " << r.chosen_epoch << " of attempt " << r.chosen_repeat + 1
              << ", validation accuracy " << FormatNumber(r.chosen_accuracy) << "\n";
  }
  std::cout << "wrote " << model_path << "\n";
  return kOk;
}

// ---- eval -----------------------------------------------------------------------

struct EvalArgs {
  std::string model, data, config = "all", split = "validation", out, manifest;
  bool correct_only = false;
};

std::string EvalCsv(const GroupModel& model, const std::vector<ConfigEvaluation>& rows) {
  std::ostringstream os;
  const int classes = model.arch().num_classes;
  os << "config_pct,k,accuracy,correct,total,confidence,confidence_normalized";
  for (int c = 0; c < classes; ++c) os << ",class_" << c;
  os << "\n";
  for (const auto& r : rows) {
    os << 100 * r.k / model.num_groups() << "," << r.k << "," << FormatNumber(r.accuracy.accuracy) << ","
       << r.accuracy.correct << "," << r.accuracy.total << "," << FormatNumber(r.confidence.total) << ","
       << FormatNumber(r.confidence.normalized);
    for (int c = 0; c < classes; ++c) os << "," << FormatNumber(r.accuracy.per_class[c]);
    os << "\n";
  }
  return os.str();
}

int CmdEval(const EvalArgs& a) {
  RequireFile(a.model, "--model");
  RequireFile(a.data, "--data");
  RunManifest m("eval");
  GroupModel model = LoadCheckpoint(a.model);
  DatasetArchive archive = LoadArchive(a.data);
  m.AddInput(a.model);
  m.AddInput(a.data);
  const Dataset& data = SelectSplit(archive, a.split);
  std::vector<ConfigEvaluation> rows;
  if (a.config == "all") {
    if (model.trained_groups() < 1) throw ConfigError("model has no trained groups");
    rows = EvaluateAllConfigs(model, data, a.correct_only);
  } else {
    const int k = ConfigToK(a.config, model.num_groups());
    ConfigEvaluation e;
    e.k = k;
    e.accuracy = EvaluateAccuracy(model, k, data);
    e.confidence = EvaluateConfidence(model, k, data, a.correct_only);
    rows.push_back(e);
  }
  const std::string csv = EvalCsv(model, rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    WriteText(a.out, csv);
    m.AddOutput(a.out);
  }
  m.SetConfig("config", a.config);
  m.SetConfig("split", a.split);
  m.SetConfig("correct_only", a.correct_only);
  m.Write(ManifestPath(a.manifest, a.out.empty() ? "eval.manifest.json" : a.out + ".manifest.json"));
  return kOk;
}

// ---- profile ----------------------------------------------------------------------

struct ProfileArgs {
  std::string model, data, split = "validation", out, manifest;
  int reps = 5, warmup = 10, samples = 8;
};

std::map<int, double> AccuracyByK(const GroupModel& model, const Dataset& data) {
  std::map<int, double> acc;
  for (const auto& e : EvaluateAllConfigs(model, data)) acc[e.k] = e.accuracy.accuracy;
  return acc;
}

int CmdProfile(const ProfileArgs& a) {
  RequireFile(a.model, "--model");
  RequireFile(a.data, "--data");
  RunManifest m("profile");
  GroupModel model = LoadCheckpoint(a.model);
  DatasetArchive archive = LoadArchive(a.data);
  m.AddInput(a.model);
  m.AddInput(a.data);
  const Dataset& data = SelectSplit(archive, a.split);
  if (model.trained_groups() < 1) throw ConfigError("model has no trained groups");
  HostProfileOptions opt;
  opt.repetitions = a.reps;
  opt.warmup = a.warmup;
  auto lat = ProfileHost(model, data.Head(static_cast<std::size_t>(std::max(1, a.samples))), opt);
  PlatformProfile prof = HostProfileToPoints(lat, AccuracyByK(model, data));
  SaveProfile(prof, a.out, model.num_groups());
  m.AddOutput(a.out);
  m.SetConfig("repetitions", a.reps);
  m.SetConfig("warmup", a.warmup);
  m.SetConfig("samples", a.samples);
  m.SetConfig("split", a.split);
  json stats = json::array();
  for (const auto& l : lat) {
    stats.push_back({{"k", l.k}, {"median_ms", l.latency_ms}, {"mean_ms", l.mean_ms}, {"p95_ms", l.p95_ms}});
    std::cout << "k=" << l.k << " median " << FormatNumber(l.latency_ms) << " ms, mean "
              << FormatNumber(l.mean_ms) << " ms, p95 " << FormatNumber(l.p95_ms) << " ms\n";
  }
  m.SetConfig("latency", stats);
  if (lat.size() > 1) {
    std::cout << "range " << FormatNumber(lat.back().latency_ms / lat.front().latency_ms) << "x\n";
  }
  m.Write(ManifestPath(a.manifest, a.out + ".manifest.json"));
  return kOk;
}

// ---- govern -----------------------------------------------------------------------

struct GovernArgs {
  std::string profile, metric = "time", knobs = "config+dvfs+map", base_core, accuracy, model, data, manifest;
  double budget = 0.0;
  int groups = 4;
};

std::map<int, double> ParseAccuracyList(const std::string& text) {
  std::map<int, double> out;
  std::stringstream ss(text);
  std::string item;
  int k = 1;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out[k++] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--accuracy expects comma-separated numbers, got '" + text + "'");
    }
  }
  return out;
}

std::map<int, double> ProfileAccuracy(const std::string& list, const std::string& model_path,
                                      const std::string& data_path, RunManifest& m) {
  if (!list.empty()) return ParseAccuracyList(list);
  if (model_path.empty()) return {};
  RequireFile(model_path, "--model");
  RequireFile(data_path, "--data");
  m.AddInput(model_path);
  m.AddInput(data_path);
  const GroupModel model = LoadCheckpoint(model_path);
  const DatasetArchive archive = LoadArchive(data_path);
  return AccuracyByK(model, archive.validation);
}

std::string PointLine(const OperatingPoint& p, int groups) {
  std::ostringstream os;
  os << p.platform << "/" << p.core << " @ " << p.freq_hz << " Hz, config " << 100 * p.config_k / groups
     << "% (k=" << p.config_k << "), latency " << FormatNumber(p.latency_ms) << " ms";
  if (p.power_mw) os << ", power " << FormatNumber(*p.power_mw) << " mW";
  if (p.energy_mj) os << ", energy " << FormatNumber(*p.energy_mj) << " mJ";
  os << ", accuracy " << FormatNumber(p.accuracy);
  return os.str();
}

int CmdGovern(const GovernArgs& a) {
  RequireFile(a.profile, "--profile");
  RunManifest m("govern");
  m.AddInput(a.profile);
  const auto acc = ProfileAccuracy(a.accuracy, a.model, a.data, m);
  PlatformProfile prof = LoadProfile(a.profile, acc, a.groups);
  KnobSet knobs = KnobSet::Parse(a.knobs);
  knobs.base_core = a.base_core;
  const Metric metric = ParseMetric(a.metric);
  m.SetConfig("budget", {{"metric", MetricName(metric)}, {"limit", a.budget}});
  m.SetConfig("knobs", knobs.Label());
  m.SetConfig("base_core", a.base_core);
  m.Write(ManifestPath(a.manifest, "govern.manifest.json"));

  std::cout << "ranges:";
  for (Metric mt : {Metric::kTime, Metric::kPower, Metric::kEnergy}) {
    bool any = false;
    for (const auto& p : AllowedPoints(prof, knobs)) any |= MetricValue(p, mt).has_value();
    if (any) std::cout << " " << MetricName(mt) << "=" << FormatNumber(DynamicRange(prof, mt, knobs)) << "x";
  }
  std::cout << " (knobs " << knobs.Label() << ")\n";
  try {
    const OperatingPoint p = SelectPoint(prof, {metric, a.budget}, knobs);
    std::cout << "selected: " << PointLine(p, a.groups) << "\n";
  } catch (const InfeasibleError& e) {
    std::cout << "infeasible: minimum achievable " << MetricName(metric) << " is "
              << FormatNumber(e.min_achievable()) << "\n";
    throw;
  }
  return kOk;
}

// ---- report -----------------------------------------------------------------------

struct ReportArgs {
  std::string model, data, out_dir, manifest;
  std::vector<std::string> profiles;
};

std::string KnobLabel(const PlatformProfile& prof, const OperatingPoint& p) {
  for (const KnobSet& k : {KnobSet::ConfigOnly(), KnobSet::ConfigDvfs(), KnobSet::ConfigDvfsMapping()}) {
    for (const auto& q : AllowedPoints(prof, k)) {
      if (q.CoreId() == p.CoreId() && q.freq_hz == p.freq_hz && q.config_k == p.config_k) return k.Label();
    }
  }
  return "none";
}

int CmdReport(const ReportArgs& a) {
  if (a.model.empty() || a.data.empty() || a.out_dir.empty()) throw UsageError("report needs --model, --data and --out-dir");
  RequireFile(a.model, "--model");
  RequireFile(a.data, "--data");
  for (const auto& p : a.profiles) RequireFile(p, "--profile");
  RunManifest m("report");
  const GroupModel model = LoadCheckpoint(a.model);
  const DatasetArchive archive = LoadArchive(a.data);
  m.AddInput(a.model);
  m.AddInput(a.data);
  const int groups = model.num_groups();
  fs::create_directories(a.out_dir);
  auto out_path = [&](const char* name) { return (fs::path(a.out_dir) / name).string(); };

  const auto evals = EvaluateAllConfigs(model, archive.validation);
  std::map<int, double> acc;
  std::ostringstream fig2, fig3;
  fig2 << "config_pct,k,accuracy\n";
  fig3 << "config_pct,k,confidence_normalized\n";
  for (const auto& e : evals) {
    acc[e.k] = e.accuracy.accuracy;
    fig2 << 100 * e.k / groups << "," << e.k << "," << FormatNumber(e.accuracy.accuracy) << "\n";
    fig3 << 100 * e.k / groups << "," << e.k << "," << FormatNumber(e.confidence.normalized) << "\n";
  }
  WriteText(out_path("fig2.csv"), fig2.str());
  WriteText(out_path("fig3.csv"), fig3.str());

  std::ostringstream fig4, fig5, summary;
  fig4 << "platform,core,freq_hz,config_pct,latency_ms\n";
  fig5 << "profile,knobs,platform,core,freq_hz,config_pct,accuracy,latency_ms,power_mw,energy_mj\n";
  summary << "profile,knobs,rrcr_pct,range_time,range_power,range_energy,model_size_kb\n";
  const double size_kb = ModelSizeBytes(model.arch(), groups) / 1000.0;
  const double rrcr = 100.0 * (groups - 1) / groups;
  auto opt = [](const std::optional<double>& v) { return v ? FormatNumber(*v) : std::string(); };
  for (const auto& path : a.profiles) {
    m.AddInput(path);
    const PlatformProfile prof = LoadProfile(path, acc, groups);
    const std::string name = fs::path(path).stem().string();
    for (const auto& p : prof.points) {
      fig4 << p.platform << "," << p.core << "," << p.freq_hz << "," << 100 * p.config_k / groups << ","
           << FormatNumber(p.latency_ms) << "\n";
      fig5 << name << "," << KnobLabel(prof, p) << "," << p.platform << "," << p.core << "," << p.freq_hz << ","
           << 100 * p.config_k / groups << "," << FormatNumber(p.accuracy) << "," << FormatNumber(p.latency_ms)
           << "," << opt(p.power_mw) << "," << opt(p.energy_mj) << "\n";
    }
    for (const KnobSet& k : {KnobSet::ConfigOnly(), KnobSet::ConfigDvfs(), KnobSet::ConfigDvfsMapping()}) {
      summary << name << "," << k.Label() << "," << FormatNumber(rrcr);
      for (Metric mt : {Metric::kTime, Metric::kPower, Metric::kEnergy}) {
        bool any = false;
        for (const auto& p : AllowedPoints(prof, k)) any |= MetricValue(p, mt).has_value();
        summary << "," << (any ? FormatNumber(DynamicRange(prof, mt, k)) : std::string());
      }
      summary << "," << FormatNumber(size_kb) << "\n";
    }
  }
  if (a.profiles.empty()) summary << "none,none," << FormatNumber(rrcr) << ",,,," << FormatNumber(size_kb) << "\n";
  WriteText(out_path("fig4.csv"), fig4.str());
  WriteText(out_path("fig5.csv"), fig5.str());
  WriteText(out_path("summary.csv"), summary.str());
  for (const char* f : {"fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv", "summary.csv"}) m.AddOutput(out_path(f));
  m.Write(ManifestPath(a.manifest, out_path("manifest.json")));
  std::cout << "wrote report to " << a.out_dir << "\n";
  return kOk;
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const InputError*>(&e)) return kUsage;
  if (dynamic_cast<const IngestionError*>(&e) || dynamic_cast<const LoadError*>(&e) ||
      dynamic_cast<const ProfileParseError*>(&e)) {
    return kFormat;
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const StateError*>(&e) ||
      dynamic_cast<const DimensionError*>(&e)) {
    return kState;
  }
  if (dynamic_cast<const InfeasibleError*>(&e)) return kInfeasible;
  if (dynamic_cast<const MeasurementError*>(&e)) return kMeasurement;
  return kOther;
}

int Run(int argc, char** argv) {
  CLI::App app{"Incrementally trained dynamic-width CNN toolkit"};
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* c_prep = app.add_subcommand("prepare-data", "Build a dataset archive from CIFAR-10 or synthetic data");
  c_prep->add_option("--cifar-dir", prep.cifar_dir, "Directory holding the CIFAR-10 binary batches");
  c_prep->add_option("--synthetic", prep.synthetic, "Generate N synthetic train+validation samples");
  c_prep->add_option("--synthetic-kind", prep.synthetic_kind, "motifs (default) or blobs");
  c_prep->add_option("--classes", prep.classes, "Synthetic class count")->check(CLI::Range(1, 10));
  c_prep->add_option("--seed", prep.seed, "Synthetic generator seed");
  c_prep->add_option("--val-count", prep.val_count, "Held-out validation records (default 5000 / N/5)");
  c_prep->add_option("--test-count", prep.test_count, "Test records to keep or generate");
  c_prep->add_option("--limit", prep.limit, "Use only the first N CIFAR-10 training records");
  c_prep->add_option("--out", prep.out, "Output archive path")->required();
  c_prep->add_option("--manifest", prep.manifest, "Manifest path");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Run the incremental group-wise training");
  c_train->add_option("--data", train.data, "Dataset archive")->required();
  c_train->add_option("--plan", train.plan, "Training plan JSON");
  c_train->add_option("--arch", train.arch, "Architecture JSON");
  c_train->add_option("--out-dir", train.out_dir, "Output directory")->required();
  c_train->add_option("--epochs", train.epochs, "Override epochs per step");
  c_train->add_option("--seed", train.seed, "Override the plan seed");
  c_train->add_flag("!--no-checkpoints", train.keep_checkpoints, "Do not write per-epoch checkpoints");
  c_train->add_flag("--quiet", train.quiet, "No per-epoch log");
  c_train->add_option("--manifest", train.manifest, "Manifest path");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Accuracy and confidence per model width");
  c_eval->add_option("--model", eval.model, "Checkpoint")->required();
  c_eval->add_option("--data", eval.data, "Dataset archive")->required();
  c_eval->add_option("--config", eval.config, "25, 50, 75, 100 or all");
  c_eval->add_option("--split", eval.split, "train, validation or test");
  c_eval->add_flag("--correct-only", eval.correct_only, "Sum confidence over correct images only");
  c_eval->add_option("--out", eval.out, "CSV output (default stdout)");
  c_eval->add_option("--manifest", eval.manifest, "Manifest path");

  ProfileArgs prof;
  auto* c_prof = app.add_subcommand("profile", "Measure host latency per width");
  c_prof->add_option("--model", prof.model, "Checkpoint")->required();
  c_prof->add_option("--data", prof.data, "Dataset archive")->required();
  c_prof->add_option("--split", prof.split, "Split used for samples and accuracy");
  c_prof->add_option("--reps", prof.reps, "Timed repetitions (at least 3)");
  c_prof->add_option("--warmup", prof.warmup, "Discarded warm-up inferences per width");
  c_prof->add_option("--samples", prof.samples, "Images per repetition");
  c_prof->add_option("--out", prof.out, "Profile CSV output")->required();
  c_prof->add_option("--manifest", prof.manifest, "Manifest path");

  GovernArgs gov;
  auto* c_gov = app.add_subcommand("govern", "Pick an operating point for a budget");
  c_gov->add_option("--profile", gov.profile, "Profile CSV")->required();
  c_gov->add_option("--budget-metric", gov.metric, "time, power or energy");
  c_gov->add_option("--budget", gov.budget, "Budget limit (ms, mW or mJ)")->required();
  c_gov->add_option("--knobs", gov.knobs, "config, config+dvfs or config+dvfs+map");
  c_gov->add_option("--base-core", gov.base_core, "Core used when mapping is disabled");
  c_gov->add_option("--accuracy", gov.accuracy, "Comma-separated accuracy for k=1..G");
  c_gov->add_option("--model", gov.model, "Checkpoint supplying accuracy per width");
  c_gov->add_option("--data", gov.data, "Dataset archive used with --model");
  c_gov->add_option("--groups", gov.groups, "Group count for config_pct");
  c_gov->add_option("--manifest", gov.manifest, "Manifest path");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Write plot-ready CSVs and a summary table");
  c_rep->add_option("--model", rep.model, "Checkpoint");
  c_rep->add_option("--data", rep.data, "Dataset archive");
  c_rep->add_option("--profile", rep.profiles, "Profile CSV (repeatable)");
  c_rep->add_option("--out-dir", rep.out_dir, "Output directory");
  c_rep->add_option("--manifest", rep.manifest, "Manifest path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (c_prep->parsed()) return CmdPrepare(prep);
    if (c_train->parsed()) return CmdTrain(train);
    if (c_eval->parsed()) return CmdEval(eval);
    if (c_prof->parsed()) return CmdProfile(prof);
    if (c_gov->parsed()) return CmdGovern(gov);
    if (c_rep->parsed()) return CmdReport(rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kUsage;
}

}  // namespace
}  // namespace gdnn::tools

int main(int argc, char** argv) { return gdnn::tools::Run(argc, argv); }
