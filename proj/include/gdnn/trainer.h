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

#ifndef GDNN_TRAINER_H_
#define GDNN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gdnn/dataset.h"
#include "gdnn/groupnet.h"

namespace gdnn {

enum class ConvInit {
  kGlorotUniform,  // +-sqrt(6 / (fan_in + fan_out))
  kHeUniform,      // +-sqrt(6 / fan_in)
};

struct TrainPlan {
  int epochs_per_step = 50;
  int batch_size = 32;
  float base_lr = 0.01f;
  float momentum = 0.9f;
  // FC learning rate at increment i is base_lr * fc_lr_decay^(i-1).
  float fc_lr_decay = 0.1f;
  // Required validation gain, in percentage points, for increments >= 3.
  double target_improvement = 1.0;
  int max_repeats = 3;
  std::uint64_t rng_seed = 1;
  // Step decay: lr *= lr_gamma every lr_step_epochs epochs (0 disables).
  int lr_step_epochs = 0;
  float lr_gamma = 0.1f;
  // Initialisation of the conv weights of the group being trained. The FC
  // column block always uses Glorot-uniform.
  ConvInit conv_init = ConvInit::kGlorotUniform;

  void Validate() const;
  float LearningRate(int epoch) const;
  float FcLearningRate(int step, int epoch) const;
};

// One intermediate model saved at the end of an epoch.
struct Checkpoint {
  int step = 0;
  int repeat = 0;
  int epoch = 0;  // 1-based
  double val_accuracy = 0.0;
  GroupModel model;
  std::string path;  // empty when not written to disk
};

struct IncrementResult {
  std::vector<Checkpoint> checkpoints;
  std::vector<float> conv_lr;  // per epoch
  std::vector<float> fc_lr;    // per epoch
  std::vector<double> train_loss;
};

// Where intermediate checkpoints go. Empty directory keeps them in memory.
struct TrainOutput {
  std::string checkpoint_dir;
  std::function<void(const std::string&)> log;
};

// Trains group `step` (1-based) on top of the frozen groups 1..step-1 of
// `seed`. Group `step` and its FC column block are freshly initialised from
// (plan.rng_seed, step, repeat); later groups stay zero. Throws StateError
// unless seed.trained_groups() == step - 1, InputError for empty data.
IncrementResult TrainIncrement(const GroupModel& seed, int step, const Dataset& train,
                               const Dataset& validation, const TrainPlan& plan, int repeat = 0,
                               const TrainOutput& output = {});

struct SeedCriterion {
  enum class Mode { kMaxAccuracy, kImprovement };
  Mode mode = Mode::kMaxAccuracy;
  double baseline = 0.0;  // fraction
  double delta = 0.0;     // fraction
};

// Max mode: argmax of validation accuracy, earliest epoch on ties.
// Improvement mode: earliest checkpoint with accuracy >= baseline + delta, or
// nullopt, which means the increment has to be repeated.
std::optional<std::size_t> SelectSeed(const std::vector<Checkpoint>& checkpoints,
                                      const SeedCriterion& criterion);
std::optional<std::size_t> SelectSeed(const std::vector<double>& accuracies,
                                      const SeedCriterion& criterion);

struct AttemptLog {
  int repeat = 0;
  std::vector<double> val_accuracy;
  std::vector<double> train_loss;
};

struct StepReport {
  int step = 0;
  std::vector<AttemptLog> attempts;
  int chosen_repeat = 0;
  int chosen_epoch = 0;
  double chosen_accuracy = 0.0;
  double baseline_accuracy = 0.0;  // previous width's accuracy (0 for step 1)
  double improvement = 0.0;        // chosen - baseline, fraction
  int repeats_used = 1;
  bool target_met = true;
  float fc_lr = 0.0f;  // effective FC learning rate at the first epoch
  std::string warning;
};

struct TrainingResult {
  GroupModel model;
  std::vector<StepReport> reports;
  std::vector<GroupModel> step_models;  // chosen seed after each step
};

// Runs increments 1..G. Increments 1 and 2 keep the best epoch; later ones
// need a gain of target_improvement over the previous width and are repeated
// (group re-initialised) up to max_repeats times. On exhaustion the best
// candidate is kept and the report carries a warning.
TrainingResult RunFullTraining(const GroupNetArch& arch, const Dataset& train,
                               const Dataset& validation, const TrainPlan& plan,
                               std::span<const float> input_mean = {},
                               const TrainOutput& output = {});

// CSV with header step,epoch,val_accuracy,chosen,repeats; one row per epoch
// of every attempt, "repeats" being the 1-based attempt number.
std::string StepReportsCsv(const std::vector<StepReport>& reports);

}  // namespace gdnn

#endif  // GDNN_TRAINER_H_
