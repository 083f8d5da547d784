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

#include "gdnn/sgd.h"

#include "gdnn/errors.h"

namespace gdnn {

void SgdStep(Tensor& params, GradBuffer& buffer, float lr, float momentum, bool frozen) {
  if (frozen) return;
  if (buffer.grad.dims() != params.dims() || buffer.velocity.dims() != params.dims()) {
    throw DimensionError("sgd: gradient buffer " + buffer.grad.ShapeString() +
                         " not congruent with parameters " + params.ShapeString());
  }
  float* p = params.data();
  float* v = buffer.velocity.data();
  const float* g = buffer.grad.data();
  for (std::size_t i = 0; i < params.size(); ++i) {
    v[i] = momentum * v[i] + g[i];
    p[i] -= lr * v[i];
  }
}

}  // namespace gdnn
