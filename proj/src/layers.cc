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

#include "gdnn/layers.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "gdnn/errors.h"

namespace gdnn {
namespace {

std::string Str(std::string_view s) { return std::string(s); }

void RequireRank(const Tensor& t, std::size_t rank, std::string_view layer, std::string_view what) {
  if (t.rank() != rank) {
    throw DimensionError(Str(layer) + ": " + Str(what) + " must have rank " + std::to_string(rank) +
                         ", got shape " + t.ShapeString());
  }
}

// Reduction over 8-wide vector lanes (two accumulators for ILP). Order is
// fixed, so results are reproducible run to run.
typedef float Vec8 __attribute__((vector_size(32)));

float Dot(const float* a, const float* b, std::size_t n) {
  Vec8 acc0 = {}, acc1 = {};
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    Vec8 a0, a1, b0, b1;
    std::memcpy(&a0, a + i, sizeof(Vec8));
    std::memcpy(&b0, b + i, sizeof(Vec8));
    std::memcpy(&a1, a + i + 8, sizeof(Vec8));
    std::memcpy(&b1, b + i + 8, sizeof(Vec8));
    acc0 += a0 * b0;
    acc1 += a1 * b1;
  }
  acc0 += acc1;
  float sum = ((acc0[0] + acc0[1]) + (acc0[2] + acc0[3])) + ((acc0[4] + acc0[5]) + (acc0[6] + acc0[7]));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void Axpy(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

// ---- specs -----------------------------------------------------------------

void ConvSpec::Validate() const {
  if (kernel < 1 || stride < 1 || pad < 0 || in_channels < 1 || out_channels < 1) {
    throw ConfigError("conv spec requires kernel>=1, stride>=1, pad>=0 and positive channels");
  }
}

int ConvSpec::OutputExtent(int input_extent) const {
  const int span = input_extent + 2 * pad - kernel;
  if (span < 0) {
    throw DimensionError("conv window " + std::to_string(kernel) + " exceeds padded input extent " +
                         std::to_string(input_extent + 2 * pad));
  }
  return span / stride + 1;
}

void LrnSpec::Validate() const {
  if (local_size < 1 || local_size % 2 == 0) {
    throw ConfigError("lrn local_size must be odd and >= 1, got " + std::to_string(local_size));
  }
  if (!(alpha >= 0.0f) || !(beta > 0.0f) || !(k > 0.0f)) {
    throw ConfigError("lrn requires alpha >= 0, beta > 0, k > 0");
  }
}

void PoolSpec::Validate() const {
  if (kernel < 1 || stride < 1) throw ConfigError("pool spec requires kernel>=1 and stride>=1");
}

int PoolSpec::OutputExtent(int input_extent) const {
  if (input_extent < kernel) {
    throw DimensionError("pool window " + std::to_string(kernel) + " larger than input extent " +
                         std::to_string(input_extent));
  }
  return (input_extent - kernel) / stride + 1;
}

// ---- convolution -----------------------------------------------------------

Tensor Conv2dForward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                     const ConvSpec& spec, ConvContext* ctx, std::string_view layer) {
  spec.Validate();
  RequireRank(input, 3, layer, "input");
  RequireRank(weights, 4, layer, "weights");
  if (input.dim(0) != spec.in_channels) {
    throw DimensionError(Str(layer) + ": input channel dim " + std::to_string(input.dim(0)) +
                         " != in_channels " + std::to_string(spec.in_channels));
  }
  const std::vector<int> want_w = {spec.out_channels, spec.in_channels, spec.kernel, spec.kernel};
  if (weights.dims() != want_w) {
    throw DimensionError(Str(layer) + ": weight shape " + weights.ShapeString() +
                         " does not match spec");
  }
  if (bias.rank() != 1 || bias.dim(0) != spec.out_channels) {
    throw DimensionError(Str(layer) + ": bias shape " + bias.ShapeString() + " != [" +
                         std::to_string(spec.out_channels) + "]");
  }
  const int cin = spec.in_channels, cout = spec.out_channels, k = spec.kernel, s = spec.stride;
  const int h = input.dim(1), w = input.dim(2);
  const int oh = spec.OutputExtent(h), ow = spec.OutputExtent(w);
  const int hp = h + 2 * spec.pad, wp = w + 2 * spec.pad;
  const std::size_t plane = static_cast<std::size_t>(hp) * wp;

  Tensor padded({cin, hp, wp});
  for (int c = 0; c < cin; ++c) {
    for (int y = 0; y < h; ++y) {
      std::copy_n(&input.at(c, y, 0), w, &padded.at(c, y + spec.pad, spec.pad));
    }
  }

  Tensor out({cout, oh, ow});
  const float* pad_data = padded.data();
  if (s == 1) {
    // Compute on "wide" rows of length wp so the inner loop runs over one
    // contiguous span; columns ow..wp-1 of each row are discarded.
    const std::size_t span = static_cast<std::size_t>(oh - 1) * wp + ow;
    std::vector<float> acc(span);
    for (int co = 0; co < cout; ++co) {
      std::fill(acc.begin(), acc.end(), bias[co]);
      const float* wrow = weights.data() + static_cast<std::size_t>(co) * cin * k * k;
      for (int ci = 0; ci < cin; ++ci) {
        for (int kh = 0; kh < k; ++kh) {
          for (int kw = 0; kw < k; ++kw) {
            Axpy(wrow[(ci * k + kh) * k + kw], pad_data + ci * plane + kh * wp + kw, acc.data(),
                 span);
          }
        }
      }
      for (int y = 0; y < oh; ++y) {
        std::copy_n(acc.data() + static_cast<std::size_t>(y) * wp, ow, &out.at(co, y, 0));
      }
    }
  } else {
    std::vector<float> row(ow);
    for (int co = 0; co < cout; ++co) {
      const float* wrow = weights.data() + static_cast<std::size_t>(co) * cin * k * k;
      for (int y = 0; y < oh; ++y) {
        std::fill(row.begin(), row.end(), bias[co]);
        for (int ci = 0; ci < cin; ++ci) {
          for (int kh = 0; kh < k; ++kh) {
            const float* src = pad_data + ci * plane + static_cast<std::size_t>(y * s + kh) * wp;
            for (int kw = 0; kw < k; ++kw) {
              const float wv = wrow[(ci * k + kh) * k + kw];
              for (int x = 0; x < ow; ++x) row[x] += wv * src[x * s + kw];
            }
          }
        }
        std::copy(row.begin(), row.end(), &out.at(co, y, 0));
      }
    }
  }

  if (ctx) {
    ctx->spec = spec;
    ctx->in_h = h;
    ctx->in_w = w;
    ctx->out_h = oh;
    ctx->out_w = ow;
    ctx->padded = std::move(padded);
    ctx->ready = true;
  }
  return out;
}

ConvGrads Conv2dBackward(const ConvContext& ctx, const Tensor& weights, const Tensor& grad_out,
                         bool want_input_grad) {
  if (!ctx.ready) throw StateError("conv backward called without a forward context");
  const ConvSpec& spec = ctx.spec;
  const int cin = spec.in_channels, cout = spec.out_channels, k = spec.kernel, s = spec.stride;
  const int oh = ctx.out_h, ow = ctx.out_w;
  const std::vector<int> want_g = {cout, oh, ow};
  if (grad_out.dims() != want_g) {
    throw DimensionError("conv backward: upstream gradient " + grad_out.ShapeString() +
                         " does not match forward output");
  }
  const int hp = ctx.padded.dim(1), wp = ctx.padded.dim(2);
  const std::size_t plane = static_cast<std::size_t>(hp) * wp;
  const float* pad_data = ctx.padded.data();

  ConvGrads grads;
  grads.weights = Tensor({cout, cin, k, k});
  grads.bias = Tensor({cout});
  Tensor grad_pad;
  if (want_input_grad) grad_pad = Tensor({cin, hp, wp});

  for (int co = 0; co < cout; ++co) {
    float bsum = 0.0f;
    const float* g = grad_out.data() + static_cast<std::size_t>(co) * oh * ow;
    for (int i = 0; i < oh * ow; ++i) bsum += g[i];
    grads.bias[co] = bsum;
  }

  if (s == 1) {
    const std::size_t span = static_cast<std::size_t>(oh - 1) * wp + ow;
    std::vector<float> wide(span);
    for (int co = 0; co < cout; ++co) {
      std::fill(wide.begin(), wide.end(), 0.0f);
      for (int y = 0; y < oh; ++y) {
        std::copy_n(&grad_out.at(co, y, 0), ow, wide.data() + static_cast<std::size_t>(y) * wp);
      }
      float* gw = grads.weights.data() + static_cast<std::size_t>(co) * cin * k * k;
      const float* wrow = weights.data() + static_cast<std::size_t>(co) * cin * k * k;
      for (int ci = 0; ci < cin; ++ci) {
        for (int kh = 0; kh < k; ++kh) {
          for (int kw = 0; kw < k; ++kw) {
            const std::size_t off = ci * plane + kh * wp + kw;
            const int widx = (ci * k + kh) * k + kw;
            gw[widx] = Dot(wide.data(), pad_data + off, span);
            if (want_input_grad) Axpy(wrow[widx], wide.data(), grad_pad.data() + off, span);
          }
        }
      }
    }
  } else {
    for (int co = 0; co < cout; ++co) {
      float* gw = grads.weights.data() + static_cast<std::size_t>(co) * cin * k * k;
      const float* wrow = weights.data() + static_cast<std::size_t>(co) * cin * k * k;
      for (int ci = 0; ci < cin; ++ci) {
        for (int kh = 0; kh < k; ++kh) {
          for (int kw = 0; kw < k; ++kw) {
            const int widx = (ci * k + kh) * k + kw;
            float acc = 0.0f;
            for (int y = 0; y < oh; ++y) {
              for (int x = 0; x < ow; ++x) {
                const std::size_t p = ci * plane + static_cast<std::size_t>(y * s + kh) * wp + x * s + kw;
                const float g = grad_out.at(co, y, x);
                acc += g * pad_data[p];
                if (want_input_grad) grad_pad.data()[p] += wrow[widx] * g;
              }
            }
            gw[widx] = acc;
          }
        }
      }
    }
  }

  if (want_input_grad) {
    grads.input = Tensor({cin, ctx.in_h, ctx.in_w});
    for (int c = 0; c < cin; ++c) {
      for (int y = 0; y < ctx.in_h; ++y) {
        std::copy_n(&grad_pad.at(c, y + spec.pad, spec.pad), ctx.in_w, &grads.input.at(c, y, 0));
      }
    }
  }
  return grads;
}

// ---- relu ------------------------------------------------------------------

Tensor ReluForward(const Tensor& input, ReluContext* ctx) {
  Tensor out = input;
  for (float& v : out.values()) v = v > 0.0f ? v : 0.0f;
  if (ctx) {
    ctx->output = out;
    ctx->ready = true;
  }
  return out;
}

Tensor ReluBackward(const ReluContext& ctx, const Tensor& grad_out) {
  if (!ctx.ready) throw StateError("relu backward called without a forward context");
  if (grad_out.dims() != ctx.output.dims()) {
    throw DimensionError("relu backward: gradient shape " + grad_out.ShapeString() +
                         " != " + ctx.output.ShapeString());
  }
  Tensor grad = grad_out;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!(ctx.output[i] > 0.0f)) grad[i] = 0.0f;
  }
  return grad;
}

// ---- lrn -------------------------------------------------------------------

Tensor LrnForward(const Tensor& input, const LrnSpec& spec, LrnContext* ctx) {
  spec.Validate();
  RequireRank(input, 3, "lrn", "input");
  const int c_count = input.dim(0);
  const std::size_t plane = static_cast<std::size_t>(input.dim(1)) * input.dim(2);
  const int half = (spec.local_size - 1) / 2;
  const float alpha_over_n = spec.alpha / static_cast<float>(spec.local_size);

  Tensor squares = input;
  for (float& v : squares.values()) v = v * v;
  Tensor scale(input.dims());
  Tensor out(input.dims());
  std::vector<float> window(plane);
  for (int c = 0; c < c_count; ++c) {
    std::fill(window.begin(), window.end(), 0.0f);
    const int lo = std::max(0, c - half), hi = std::min(c_count - 1, c + half);
    for (int j = lo; j <= hi; ++j) {
      const float* sq = squares.data() + j * plane;
      for (std::size_t p = 0; p < plane; ++p) window[p] += sq[p];
    }
    float* sc = scale.data() + c * plane;
    const float* in = input.data() + c * plane;
    float* o = out.data() + c * plane;
    for (std::size_t p = 0; p < plane; ++p) {
      sc[p] = spec.k + alpha_over_n * window[p];
      o[p] = in[p] * std::pow(sc[p], -spec.beta);
    }
  }
  if (ctx) {
    ctx->spec = spec;
    ctx->input = input;
    ctx->scale = std::move(scale);
    ctx->ready = true;
  }
  return out;
}

Tensor LrnBackward(const LrnContext& ctx, const Tensor& grad_out) {
  if (!ctx.ready) throw StateError("lrn backward called without a forward context");
  if (grad_out.dims() != ctx.input.dims()) {
    throw DimensionError("lrn backward: gradient shape " + grad_out.ShapeString() + " != " +
                         ctx.input.ShapeString());
  }
  const LrnSpec& spec = ctx.spec;
  const int c_count = ctx.input.dim(0);
  const std::size_t plane = static_cast<std::size_t>(ctx.input.dim(1)) * ctx.input.dim(2);
  const int half = (spec.local_size - 1) / 2;
  const float coeff = 2.0f * spec.alpha * spec.beta / static_cast<float>(spec.local_size);

  // ratio[j] = g[j] * out[j] / scale[j] = g[j] * in[j] * scale[j]^(-beta-1)
  Tensor ratio(ctx.input.dims());
  Tensor grad(ctx.input.dims());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    const float powed = std::pow(ctx.scale[i], -spec.beta);
    ratio[i] = grad_out[i] * ctx.input[i] * powed / ctx.scale[i];
    grad[i] = grad_out[i] * powed;
  }
  std::vector<float> window(plane);
  for (int c = 0; c < c_count; ++c) {
    std::fill(window.begin(), window.end(), 0.0f);
    const int lo = std::max(0, c - half), hi = std::min(c_count - 1, c + half);
    for (int j = lo; j <= hi; ++j) {
      const float* r = ratio.data() + j * plane;
      for (std::size_t p = 0; p < plane; ++p) window[p] += r[p];
    }
    float* g = grad.data() + c * plane;
    const float* in = ctx.input.data() + c * plane;
    for (std::size_t p = 0; p < plane; ++p) g[p] -= coeff * in[p] * window[p];
  }
  return grad;
}

// ---- max pooling -----------------------------------------------------------

Tensor MaxPoolForward(const Tensor& input, const PoolSpec& spec, MaxPoolContext* ctx,
                      std::string_view layer) {
  spec.Validate();
  RequireRank(input, 3, layer, "input");
  const int c_count = input.dim(0), h = input.dim(1), w = input.dim(2);
  if (h < spec.kernel || w < spec.kernel) {
    throw DimensionError(Str(layer) + ": window " + std::to_string(spec.kernel) +
                         " larger than input " + input.ShapeString());
  }
  const int oh = spec.OutputExtent(h), ow = spec.OutputExtent(w);
  Tensor out({c_count, oh, ow});
  std::vector<std::int32_t> argmax(out.size());
  std::size_t o = 0;
  for (int c = 0; c < c_count; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x, ++o) {
        const int y0 = y * spec.stride, x0 = x * spec.stride;
        std::int32_t best = static_cast<std::int32_t>((static_cast<std::size_t>(c) * h + y0) * w + x0);
        float best_v = input[best];
        for (int ky = 0; ky < spec.kernel; ++ky) {
          for (int kx = 0; kx < spec.kernel; ++kx) {
            const std::int32_t idx =
                static_cast<std::int32_t>((static_cast<std::size_t>(c) * h + y0 + ky) * w + x0 + kx);
            if (input[idx] > best_v) {
              best_v = input[idx];
              best = idx;
            }
          }
        }
        out[o] = best_v;
        argmax[o] = best;
      }
    }
  }
  if (ctx) {
    ctx->input_dims = input.dims();
    ctx->argmax = std::move(argmax);
    ctx->ready = true;
  }
  return out;
}

Tensor MaxPoolBackward(const MaxPoolContext& ctx, const Tensor& grad_out) {
  if (!ctx.ready) throw StateError("maxpool backward called without a forward context");
  if (grad_out.size() != ctx.argmax.size()) {
    throw DimensionError("maxpool backward: gradient shape " + grad_out.ShapeString() +
                         " does not match forward output");
  }
  Tensor grad(ctx.input_dims);
  for (std::size_t i = 0; i < ctx.argmax.size(); ++i) grad[ctx.argmax[i]] += grad_out[i];
  return grad;
}

// ---- fully connected -------------------------------------------------------

Tensor FcForwardLeadingColumns(std::span<const float> input, const Tensor& weights,
                               const Tensor& bias) {
  if (weights.rank() != 2 || bias.rank() != 1 || bias.dim(0) != weights.dim(0)) {
    throw DimensionError("fc: weights " + weights.ShapeString() + " and bias " +
                         bias.ShapeString() + " disagree");
  }
  const int outputs = weights.dim(0);
  const std::size_t cols = static_cast<std::size_t>(weights.dim(1));
  if (input.size() > cols) {
    throw DimensionError("fc: " + std::to_string(input.size()) + " inputs exceed " +
                         std::to_string(cols) + " weight columns");
  }
  Tensor out({outputs});
  for (int o = 0; o < outputs; ++o) {
    const float* row = weights.data() + o * cols;
    float acc = bias[o];
    for (std::size_t d = 0; d < input.size(); ++d) acc += row[d] * input[d];
    out[o] = acc;
  }
  return out;
}

Tensor FcForward(const Tensor& input, const Tensor& weights, const Tensor& bias, FcContext* ctx) {
  if (input.rank() != 1 || weights.rank() != 2 || weights.dim(1) != input.dim(0)) {
    throw DimensionError("fc: input " + input.ShapeString() + " incompatible with weights " +
                         weights.ShapeString());
  }
  Tensor out = FcForwardLeadingColumns(input.values(), weights, bias);
  if (ctx) {
    ctx->input = input;
    ctx->ready = true;
  }
  return out;
}

FcGrads FcBackward(const FcContext& ctx, const Tensor& weights, const Tensor& grad_out) {
  if (!ctx.ready) throw StateError("fc backward called without a forward context");
  const int outputs = weights.dim(0), inputs = weights.dim(1);
  if (grad_out.rank() != 1 || grad_out.dim(0) != outputs) {
    throw DimensionError("fc backward: gradient " + grad_out.ShapeString() + " != [" +
                         std::to_string(outputs) + "]");
  }
  FcGrads grads{Tensor({inputs}), Tensor({outputs, inputs}), grad_out};
  for (int o = 0; o < outputs; ++o) {
    const float g = grad_out[o];
    const float* row = weights.data() + static_cast<std::size_t>(o) * inputs;
    float* grow = grads.weights.data() + static_cast<std::size_t>(o) * inputs;
    for (int d = 0; d < inputs; ++d) {
      grow[d] = g * ctx.input[d];
      grads.input[d] += row[d] * g;
    }
  }
  return grads;
}

// ---- output ----------------------------------------------------------------

Tensor Softmax(const Tensor& logits) {
  if (logits.empty()) throw DimensionError("softmax of an empty tensor");
  const float peak = *std::max_element(logits.values().begin(), logits.values().end());
  Tensor out(logits.dims());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (float& v : out.values()) v = static_cast<float>(v / sum);
  return out;
}

LossAndGrad CrossEntropyLoss(const Tensor& probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw InputError("label " + std::to_string(label) + " outside [0, " +
                     std::to_string(probs.size()) + ")");
  }
  LossAndGrad r;
  r.loss = static_cast<float>(-std::log(static_cast<double>(probs[label]) + kLogEpsilon));
  r.grad_logits = probs;
  r.grad_logits[label] -= 1.0f;
  return r;
}

}  // namespace gdnn
