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

#ifndef GDNN_EVALUATION_H_
#define GDNN_EVALUATION_H_

#include <cstddef>
#include <vector>

#include "gdnn/dataset.h"
#include "gdnn/groupnet.h"

namespace gdnn {

// Index of the largest probability; ties resolve to the lowest class.
int ArgMax(const Tensor& probs);

struct AccuracyReport {
  double accuracy = 0.0;                 // correct / total
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<double> per_class;         // 0 for classes without samples
  std::vector<std::size_t> per_class_count;
};

struct ConfidenceReport {
  double total = 0.0;       // sum of the true-class probability
  double normalized = 0.0;  // total(k) / total(trained width)
};

// Top-1 accuracy at width k. Throws InputError on an empty dataset and
// ConfigError when k exceeds the trained width.
AccuracyReport EvaluateAccuracy(const GroupModel& model, int k, const Dataset& data);

// With correct_only set, only correctly classified images contribute.
ConfidenceReport EvaluateConfidence(const GroupModel& model, int k, const Dataset& data,
                                    bool correct_only = false);

struct ConfigEvaluation {
  int k = 0;
  AccuracyReport accuracy;
  ConfidenceReport confidence;
};

// Every width 1..trained_groups from one pass over the data. Group features
// are computed once per image and shared by all widths; logits are identical
// to Forward(model, image, k).
std::vector<ConfigEvaluation> EvaluateAllConfigs(const GroupModel& model, const Dataset& data,
                                                 bool correct_only = false);

}  // namespace gdnn

#endif  // GDNN_EVALUATION_H_
