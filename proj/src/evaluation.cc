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

#include "gdnn/evaluation.h"

#include <string>

#include "gdnn/errors.h"
#include "gdnn/parallel.h"

namespace gdnn {
namespace {

struct Outcome {
  int predicted;
  float truth_prob;
};

void CheckInputs(const GroupModel& model, int k, const Dataset& data) {
  if (data.empty()) throw InputError("cannot evaluate on an empty dataset");
  if (k < 1 || k > model.trained_groups()) {
    throw ConfigError("model not trained to this width (k=" + std::to_string(k) +
                      ", trained groups=" + std::to_string(model.trained_groups()) + ")");
  }
}

// outcomes[i * widths + (k-1)] for k = 1..widths
std::vector<Outcome> Run(const GroupModel& model, int widths, const Dataset& data) {
  std::vector<Outcome> out(data.size() * widths);
  const int f = model.arch().FeaturesPerGroup();
  ParallelFor(data.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<float> features(static_cast<std::size_t>(widths) * f);
    for (std::size_t i = begin; i < end; ++i) {
      const Tensor image = data.Image(i);
      for (int g = 0; g < widths; ++g) {
        Tensor feat = GroupFeatures(model, g, image);
        std::copy(feat.values().begin(), feat.values().end(),
                  features.begin() + static_cast<std::size_t>(g) * f);
      }
      for (int k = 1; k <= widths; ++k) {
        Prediction p = Classify(model, std::span<const float>(features).first(static_cast<std::size_t>(k) * f));
        out[i * widths + k - 1] = {ArgMax(p.probs), p.probs[data.label(i)]};
      }
    }
  });
  return out;
}

AccuracyReport Tally(const std::vector<Outcome>& outcomes, int widths, int k, const Dataset& data) {
  AccuracyReport r;
  r.total = data.size();
  r.per_class.assign(data.num_classes(), 0.0);
  r.per_class_count.assign(data.num_classes(), 0);
  std::vector<std::size_t> hits(data.num_classes(), 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data.label(i);
    ++r.per_class_count[label];
    if (outcomes[i * widths + k - 1].predicted == label) {
      ++r.correct;
      ++hits[label];
    }
  }
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  for (int c = 0; c < data.num_classes(); ++c) {
    if (r.per_class_count[c]) r.per_class[c] = static_cast<double>(hits[c]) / r.per_class_count[c];
  }
  return r;
}

double ConfidenceTotal(const std::vector<Outcome>& outcomes, int widths, int k, const Dataset& data,
                       bool correct_only) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Outcome& o = outcomes[i * widths + k - 1];
    if (correct_only && o.predicted != data.label(i)) continue;
    total += o.truth_prob;
  }
  return total;
}

}  // namespace

int ArgMax(const Tensor& probs) {
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  }
  return best;
}

AccuracyReport EvaluateAccuracy(const GroupModel& model, int k, const Dataset& data) {
  CheckInputs(model, k, data);
  // Run at width k only: widths beyond k are never computed.
  std::vector<Outcome> outcomes(data.size());
  ParallelFor(data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Prediction p = Forward(model, data.Image(i), k);
      outcomes[i] = {ArgMax(p.probs), p.probs[data.label(i)]};
    }
  });
  return Tally(outcomes, 1, 1, data);
}

ConfidenceReport EvaluateConfidence(const GroupModel& model, int k, const Dataset& data,
                                    bool correct_only) {
  CheckInputs(model, k, data);
  const int full = model.trained_groups();
  const std::vector<Outcome> outcomes = Run(model, full, data);
  ConfidenceReport r;
  r.total = ConfidenceTotal(outcomes, full, k, data, correct_only);
  const double ref = ConfidenceTotal(outcomes, full, full, data, correct_only);
  r.normalized = ref > 0.0 ? r.total / ref : 0.0;
  return r;
}

std::vector<ConfigEvaluation> EvaluateAllConfigs(const GroupModel& model, const Dataset& data,
                                                 bool correct_only) {
  CheckInputs(model, 1, data);
  const int full = model.trained_groups();
  const std::vector<Outcome> outcomes = Run(model, full, data);
  const double ref = ConfidenceTotal(outcomes, full, full, data, correct_only);
  std::vector<ConfigEvaluation> out;
  for (int k = 1; k <= full; ++k) {
    ConfigEvaluation e;
    e.k = k;
    e.accuracy = Tally(outcomes, full, k, data);
    e.confidence.total = ConfidenceTotal(outcomes, full, k, data, correct_only);
    e.confidence.normalized = ref > 0.0 ? e.confidence.total / ref : 0.0;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace gdnn
