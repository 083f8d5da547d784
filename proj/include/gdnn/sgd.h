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

#ifndef GDNN_SGD_H_
#define GDNN_SGD_H_

#include "gdnn/tensor.h"

namespace gdnn {

// Accumulated gradient plus the momentum buffer for one parameter tensor.
struct GradBuffer {
  GradBuffer() = default;
  explicit GradBuffer(const Tensor& like) : grad(like.dims()), velocity(like.dims()) {}

  Tensor grad;
  Tensor velocity;
};

// v <- momentum * v + g; p <- p - lr * v. A frozen tensor is left untouched,
// including its momentum buffer.
void SgdStep(Tensor& params, GradBuffer& buffer, float lr, float momentum, bool frozen = false);

}  // namespace gdnn

#endif  // GDNN_SGD_H_
