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

#include "gdnn/trainer.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "gdnn/checkpoint.h"
#include "gdnn/errors.h"
#include "gdnn/evaluation.h"
#include "gdnn/parallel.h"
#include "gdnn/random.h"
#include "gdnn/sgd.h"

namespace gdnn {

void TrainPlan::Validate() const {
  if (epochs_per_step < 1) throw ConfigError("epochs_per_step must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(base_lr > 0.0f)) throw ConfigError("base_lr must be > 0");
  if (!(momentum >= 0.0f && momentum < 1.0f)) throw ConfigError("momentum must be in [0, 1)");
  if (!(fc_lr_decay > 0.0f && fc_lr_decay <= 1.0f)) throw ConfigError("fc_lr_decay must be in (0, 1]");
  if (!(target_improvement >= 0.0)) throw ConfigError("target_improvement must be >= 0");
  if (max_repeats < 1) throw ConfigError("max_repeats must be >= 1");
  if (lr_step_epochs < 0 || !(lr_gamma > 0.0f)) throw ConfigError("invalid learning-rate schedule");
}

float TrainPlan::LearningRate(int epoch) const {
  if (lr_step_epochs <= 0) return base_lr;
  return base_lr * std::pow(lr_gamma, static_cast<float>(epoch / lr_step_epochs));
}

float TrainPlan::FcLearningRate(int step, int epoch) const {
  return LearningRate(epoch) * std::pow(fc_lr_decay, static_cast<float>(step - 1));
}

namespace {

void FillUniform(Tensor& t, float limit, std::uint64_t seed) {
  Rng rng(seed);
  for (float& v : t.values()) v = rng.Uniform(-limit, limit);
}

// Uniform init of group `g`'s conv stack and FC column block; biases start at
// zero.
void InitGroup(GroupModel& model, int g, ConvInit init, std::uint64_t seed, int step, int repeat) {
  const GroupNetArch& a = model.arch();
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    const ConvSpec s = a.Conv(layer);
    const float fan_in = static_cast<float>(s.in_channels * s.kernel * s.kernel);
    const float fan_out = static_cast<float>(s.out_channels * s.kernel * s.kernel);
    const float fans = init == ConvInit::kHeUniform ? fan_in : fan_in + fan_out;
    FillUniform(model.conv_weight(layer, g), std::sqrt(6.0f / fans),
                MixSeed({seed, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(repeat),
                         static_cast<std::uint64_t>(layer)}));
    model.conv_bias(layer, g).Fill(0.0f);
  }
  const int f = a.FeaturesPerGroup();
  const int cols = a.FcInputs();
  const float limit = std::sqrt(6.0f / static_cast<float>(f + a.num_classes));
  Rng rng(MixSeed({seed, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(repeat),
                   static_cast<std::uint64_t>(kNumConvLayers)}));
  for (int o = 0; o < a.num_classes; ++o) {
    for (int d = g * f; d < (g + 1) * f; ++d) {
      model.fc_weight()[static_cast<std::size_t>(o) * cols + d] = rng.Uniform(-limit, limit);
    }
  }
}

// Features of groups [0, groups) for every image, row-major [N, groups*F].
std::vector<float> FrozenFeatures(const GroupModel& model, int groups, const Dataset& data) {
  const std::size_t width = static_cast<std::size_t>(groups) * model.arch().FeaturesPerGroup();
  std::vector<float> out(data.size() * width);
  if (groups == 0) return out;
  ParallelFor(data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Tensor image = data.Image(i);
      for (int g = 0; g < groups; ++g) {
        Tensor feat = GroupFeatures(model, g, image);
        std::copy(feat.values().begin(), feat.values().end(),
                  out.begin() + i * width + static_cast<std::size_t>(g) * feat.size());
      }
    }
  });
  return out;
}

struct SampleGrads {
  GroupGrads group;
  std::vector<float> fc_w;  // [classes, active_cols]
  std::vector<float> fc_b;
  float loss = 0.0f;
};

double ValidationAccuracy(const GroupModel& model, int g, const Dataset& val,
                          const std::vector<float>& frozen) {
  const int f = model.arch().FeaturesPerGroup();
  const std::size_t frozen_w = static_cast<std::size_t>(g) * f;
  std::vector<int> hit(val.size(), 0);
  ParallelFor(val.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<float> concat(frozen_w + f);
    for (std::size_t i = begin; i < end; ++i) {
      std::copy_n(frozen.begin() + i * frozen_w, frozen_w, concat.begin());
      Tensor feat = GroupFeatures(model, g, val.Image(i));
      std::copy(feat.values().begin(), feat.values().end(), concat.begin() + frozen_w);
      hit[i] = ArgMax(Classify(model, concat).probs) == val.label(i);
    }
  });
  std::size_t correct = 0;
  for (int h : hit) correct += h;
  return static_cast<double>(correct) / static_cast<double>(val.size());
}

}  // namespace

IncrementResult TrainIncrement(const GroupModel& seed, int step, const Dataset& train,
                               const Dataset& validation, const TrainPlan& plan, int repeat,
                               const TrainOutput& output) {
  plan.Validate();
  const GroupNetArch& a = seed.arch();
  if (step < 1 || step > a.num_groups) {
    throw ConfigError("increment " + std::to_string(step) + " outside [1, " + std::to_string(a.num_groups) + "]");
  }
  if (seed.trained_groups() != step - 1) {
    throw StateError("increment " + std::to_string(step) + " needs a model with " +
                     std::to_string(step - 1) + " trained groups, got " +
                     std::to_string(seed.trained_groups()));
  }
  if (train.empty() || validation.empty()) throw InputError("training and validation data must be non-empty");

  const int g = step - 1;
  const int f = a.FeaturesPerGroup();
  const int classes = a.num_classes;
  const int cols = a.FcInputs();
  const std::size_t frozen_w = static_cast<std::size_t>(g) * f;
  const std::size_t active = frozen_w + f;

  GroupModel model = seed;
  model.ZeroGroupsFrom(g);
  InitGroup(model, g, plan.conv_init, plan.rng_seed, step, repeat);

  const std::vector<float> frozen_train = FrozenFeatures(model, g, train);
  const std::vector<float> frozen_val = FrozenFeatures(model, g, validation);

  std::array<GradBuffer, kNumConvLayers> w_buf, b_buf;
  for (int layer = 0; layer < kNumConvLayers; ++layer) {
    w_buf[layer] = GradBuffer(model.conv_weight(layer, g));
    b_buf[layer] = GradBuffer(model.conv_bias(layer, g));
  }
  GradBuffer fc_w_buf(model.fc_weight()), fc_b_buf(model.fc_bias());

  IncrementResult result;
  std::vector<std::size_t> order(train.size());
  std::vector<SampleGrads> per_sample(plan.batch_size);

  for (int epoch = 0; epoch < plan.epochs_per_step; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle(MixSeed({plan.rng_seed, static_cast<std::uint64_t>(step),
                         static_cast<std::uint64_t>(repeat), 0x5EEDu, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.Below(i)]);

    const float conv_lr = plan.LearningRate(epoch);
    const float fc_lr = plan.FcLearningRate(step, epoch);
    result.conv_lr.push_back(conv_lr);
    result.fc_lr.push_back(fc_lr);
    double loss_sum = 0.0;

    for (std::size_t start = 0; start < order.size(); start += plan.batch_size) {
      const std::size_t batch = std::min<std::size_t>(plan.batch_size, order.size() - start);
      ParallelFor(batch, [&](std::size_t begin, std::size_t end) {
        std::vector<float> concat(active);
        for (std::size_t b = begin; b < end; ++b) {
          const std::size_t idx = order[start + b];
          GroupTrace trace;
          std::copy_n(frozen_train.begin() + idx * frozen_w, frozen_w, concat.begin());
          Tensor feat = GroupFeatures(model, g, train.Image(idx), &trace);
          std::copy(feat.values().begin(), feat.values().end(), concat.begin() + frozen_w);
          const Prediction p = Classify(model, concat);
          const LossAndGrad lg = CrossEntropyLoss(p.probs, train.label(idx));

          SampleGrads& s = per_sample[b];
          s.loss = lg.loss;
          s.fc_b.assign(lg.grad_logits.values().begin(), lg.grad_logits.values().end());
          s.fc_w.assign(static_cast<std::size_t>(classes) * active, 0.0f);
          Tensor grad_feat({f});
          for (int o = 0; o < classes; ++o) {
            const float go = lg.grad_logits[o];
            float* row = s.fc_w.data() + static_cast<std::size_t>(o) * active;
            for (std::size_t d = 0; d < active; ++d) row[d] = go * concat[d];
            const float* wrow = model.fc_weight().data() + static_cast<std::size_t>(o) * cols + frozen_w;
            for (int d = 0; d < f; ++d) grad_feat[d] += wrow[d] * go;
          }
          s.group = GroupBackward(model, g, trace, grad_feat);
        }
      });

      // Reduce in sample order so results do not depend on the thread count.
      const float scale = 1.0f / static_cast<float>(batch);
      for (int layer = 0; layer < kNumConvLayers; ++layer) {
        w_buf[layer].grad.Fill(0.0f);
        b_buf[layer].grad.Fill(0.0f);
      }
      fc_w_buf.grad.Fill(0.0f);
      fc_b_buf.grad.Fill(0.0f);
      for (std::size_t b = 0; b < batch; ++b) {
        const SampleGrads& s = per_sample[b];
        loss_sum += s.loss;
        for (int layer = 0; layer < kNumConvLayers; ++layer) {
          auto add = [](Tensor& dst, const Tensor& src) {
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
          };
          add(w_buf[layer].grad, s.group.weight[layer]);
          add(b_buf[layer].grad, s.group.bias[layer]);
        }
        for (int o = 0; o < classes; ++o) {
          float* dst = fc_w_buf.grad.data() + static_cast<std::size_t>(o) * cols;
          const float* src = s.fc_w.data() + static_cast<std::size_t>(o) * active;
          for (std::size_t d = 0; d < active; ++d) dst[d] += src[d];
          fc_b_buf.grad[o] += s.fc_b[o];
        }
      }
      for (int layer = 0; layer < kNumConvLayers; ++layer) {
        for (float& v : w_buf[layer].grad.values()) v *= scale;
        for (float& v : b_buf[layer].grad.values()) v *= scale;
        SgdStep(model.conv_weight(layer, g), w_buf[layer], conv_lr, plan.momentum);
        SgdStep(model.conv_bias(layer, g), b_buf[layer], conv_lr, plan.momentum);
      }
      for (float& v : fc_w_buf.grad.values()) v *= scale;
      for (float& v : fc_b_buf.grad.values()) v *= scale;
      SgdStep(model.fc_weight(), fc_w_buf, fc_lr, plan.momentum);
      SgdStep(model.fc_bias(), fc_b_buf, fc_lr, plan.momentum);
    }

    Checkpoint ck;
    ck.step = step;
    ck.repeat = repeat;
    ck.epoch = epoch + 1;
    ck.val_accuracy = ValidationAccuracy(model, g, validation, frozen_val);
    ck.model = model;
    ck.model.set_trained_groups(step);
    result.train_loss.push_back(loss_sum / static_cast<double>(train.size()));
    if (!output.checkpoint_dir.empty()) {
      std::filesystem::create_directories(output.checkpoint_dir);
      ck.path = (std::filesystem::path(output.checkpoint_dir) /
                 ("step" + std::to_string(step) + "_r" + std::to_string(repeat) + "_e" +
                  std::to_string(epoch + 1) + ".gdnn"))
                    .string();
      SaveCheckpoint(ck.model, ck.path);
    }
    if (output.log) {
      std::ostringstream msg;
      msg << "step " << step << " repeat " << repeat << " epoch " << epoch + 1 << ": loss "
          << result.train_loss.back() << " val_acc " << ck.val_accuracy;
      output.log(msg.str());
    }
    result.checkpoints.push_back(std::move(ck));
  }
  return result;
}

std::optional<std::size_t> SelectSeed(const std::vector<double>& acc, const SeedCriterion& c) {
  if (acc.empty()) return std::nullopt;
  if (c.mode == SeedCriterion::Mode::kMaxAccuracy) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < acc.size(); ++i) {
      if (acc[i] > acc[best]) best = i;
    }
    return best;
  }
  // Compare with a small slack so 0.63 + 0.01 accepts 0.64 despite rounding.
  const double threshold = c.baseline + c.delta - 1e-12;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] >= threshold) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> SelectSeed(const std::vector<Checkpoint>& checkpoints,
                                      const SeedCriterion& criterion) {
  std::vector<double> acc;
  for (const auto& c : checkpoints) acc.push_back(c.val_accuracy);
  return SelectSeed(acc, criterion);
}

TrainingResult RunFullTraining(const GroupNetArch& arch, const Dataset& train,
                               const Dataset& validation, const TrainPlan& plan,
                               std::span<const float> input_mean, const TrainOutput& output) {
  plan.Validate();
  TrainingResult result;
  GroupModel model = BuildModel(arch);
  if (!input_mean.empty()) model.set_input_mean({input_mean.begin(), input_mean.end()});
  double previous = 0.0;

  for (int step = 1; step <= arch.num_groups; ++step) {
    StepReport report;
    report.step = step;
    report.baseline_accuracy = previous;
    report.fc_lr = plan.FcLearningRate(step, 0);
    const bool needs_gain = step >= 3;
    const int attempts = needs_gain ? plan.max_repeats : 1;

    std::optional<Checkpoint> chosen;
    std::optional<Checkpoint> best;
    for (int repeat = 0; repeat < attempts && !chosen; ++repeat) {
      IncrementResult inc = TrainIncrement(model, step, train, validation, plan, repeat, output);
      AttemptLog log;
      log.repeat = repeat;
      log.train_loss = inc.train_loss;
      for (const auto& c : inc.checkpoints) log.val_accuracy.push_back(c.val_accuracy);
      report.attempts.push_back(log);
      report.repeats_used = repeat + 1;

      const auto top = SelectSeed(inc.checkpoints, {SeedCriterion::Mode::kMaxAccuracy});
      if (!best || inc.checkpoints[*top].val_accuracy > best->val_accuracy) best = inc.checkpoints[*top];
      if (!needs_gain) {
        chosen = inc.checkpoints[*top];
      } else if (auto hit = SelectSeed(inc.checkpoints, {SeedCriterion::Mode::kImprovement, previous,
                                                         plan.target_improvement / 100.0})) {
        chosen = inc.checkpoints[*hit];
      }
    }
    if (!chosen) {
      chosen = best;
      report.target_met = false;
      std::ostringstream w;
      w << "increment " << step << " missed the +" << plan.target_improvement
        << "pp target after " << attempts << " attempts; keeping best candidate ("
        << chosen->val_accuracy << " vs baseline " << previous << ")";
      report.warning = w.str();
      if (output.log) output.log("warning: " + report.warning);
    }
    report.chosen_repeat = chosen->repeat;
    report.chosen_epoch = chosen->epoch;
    report.chosen_accuracy = chosen->val_accuracy;
    report.improvement = chosen->val_accuracy - previous;
    previous = chosen->val_accuracy;
    model = std::move(chosen->model);
    result.step_models.push_back(model);
    result.reports.push_back(std::move(report));
  }
  result.model = std::move(model);
  return result;
}

std::string StepReportsCsv(const std::vector<StepReport>& reports) {
  std::ostringstream out;
  out << "step,epoch,val_accuracy,chosen,repeats\n";
  for (const auto& r : reports) {
    for (const auto& a : r.attempts) {
      for (std::size_t e = 0; e < a.val_accuracy.size(); ++e) {
        const bool chosen = a.repeat == r.chosen_repeat && static_cast<int>(e) + 1 == r.chosen_epoch;
        out << r.step << ',' << e + 1 << ',' << a.val_accuracy[e] << ',' << (chosen ? 1 : 0) << ','
            << a.repeat + 1 << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace gdnn
