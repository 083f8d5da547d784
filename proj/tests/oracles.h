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

// Brute-force reference implementations used only by tests. They follow the
// textbook definitions loop by loop and share no code with src/.

#ifndef GDNN_TESTS_ORACLES_H_
#define GDNN_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <vector>

#include "gdnn/layers.h"
#include "gdnn/random.h"
#include "gdnn/tensor.h"

namespace gdnn::testing {

inline Tensor RandomTensor(std::vector<int> dims, Rng& rng, float lo = -1.0f, float hi = 1.0f) {
  Tensor t(std::move(dims));
  for (float& v : t.values()) v = rng.Uniform(lo, hi);
  return t;
}

// Quadruple loop; each output starts at the bias and adds w * x over
// (ci, kh, kw) in ascending order, reading 0 outside the input.
inline Tensor ConvOracle(const Tensor& in, const Tensor& w, const Tensor& b, const ConvSpec& s) {
  const int cin = in.dim(0), h = in.dim(1), wd = in.dim(2);
  const int oh = (h + 2 * s.pad - s.kernel) / s.stride + 1;
  const int ow = (wd + 2 * s.pad - s.kernel) / s.stride + 1;
  Tensor out({s.out_channels, oh, ow});
  for (int co = 0; co < s.out_channels; ++co) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        float acc = b[co];
        for (int ci = 0; ci < cin; ++ci) {
          for (int kh = 0; kh < s.kernel; ++kh) {
            for (int kw = 0; kw < s.kernel; ++kw) {
              const int iy = y * s.stride + kh - s.pad, ix = x * s.stride + kw - s.pad;
              const float v = (iy >= 0 && iy < h && ix >= 0 && ix < wd) ? in.at(ci, iy, ix) : 0.0f;
              acc += w[((static_cast<std::size_t>(co) * cin + ci) * s.kernel + kh) * s.kernel + kw] * v;
            }
          }
        }
        out.at(co, y, x) = acc;
      }
    }
  }
  return out;
}

inline Tensor ReluOracle(const Tensor& in) {
  Tensor out(in.dims());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::max(0.0f, in[i]);
  return out;
}

// Per pixel, per channel, evaluated in double.
inline Tensor LrnOracle(const Tensor& in, const LrnSpec& s) {
  const int c_count = in.dim(0), h = in.dim(1), w = in.dim(2);
  const int half = (s.local_size - 1) / 2;
  Tensor out(in.dims());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < c_count; ++c) {
        double sum = 0.0;
        for (int j = std::max(0, c - half); j <= std::min(c_count - 1, c + half); ++j) {
          sum += static_cast<double>(in.at(j, y, x)) * in.at(j, y, x);
        }
        const double denom = std::pow(s.k + s.alpha / s.local_size * sum, s.beta);
        out.at(c, y, x) = static_cast<float>(in.at(c, y, x) / denom);
      }
    }
  }
  return out;
}

struct PoolOracleResult {
  Tensor out;
  std::vector<int> argmax;
};

inline PoolOracleResult MaxPoolOracle(const Tensor& in, const PoolSpec& s) {
  const int c_count = in.dim(0), h = in.dim(1), w = in.dim(2);
  const int oh = (h - s.kernel) / s.stride + 1, ow = (w - s.kernel) / s.stride + 1;
  PoolOracleResult r{Tensor({c_count, oh, ow}), {}};
  for (int c = 0; c < c_count; ++c) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        int best = -1;
        for (int ky = 0; ky < s.kernel; ++ky) {
          for (int kx = 0; kx < s.kernel; ++kx) {
            const int idx = (c * h + y * s.stride + ky) * w + x * s.stride + kx;
            if (best < 0 || in[idx] > in[best]) best = idx;
          }
        }
        r.out.at(c, y, x) = in[best];
        r.argmax.push_back(best);
      }
    }
  }
  return r;
}

inline Tensor FcOracle(const Tensor& in, const Tensor& w, const Tensor& b) {
  const int o_count = w.dim(0), d_count = w.dim(1);
  Tensor out({o_count});
  for (int o = 0; o < o_count; ++o) {
    float acc = b[o];
    for (int d = 0; d < d_count; ++d) acc += w[static_cast<std::size_t>(o) * d_count + d] * in[d];
    out[o] = acc;
  }
  return out;
}

inline std::vector<double> SoftmaxOracle(const Tensor& logits) {
  double peak = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) peak = std::max(peak, static_cast<double>(logits[i]));
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += out[i] = std::exp(logits[i] - peak);
  for (double& v : out) v /= sum;
  return out;
}

// Central-difference check of an analytic gradient. `loss` maps a perturbed
// copy of `x` to a scalar (evaluated in double). A coordinate passes when
// |analytic - numeric| / max(|analytic|, |numeric|, floor) < tol.
struct GradCheck {
  int checked = 0;
  int passed = 0;
  double worst = 0.0;
  double PassRate() const { return checked ? static_cast<double>(passed) / checked : 1.0; }
};

inline GradCheck CheckGradient(const std::function<double(const Tensor&)>& loss, const Tensor& x,
                               const Tensor& analytic, Rng& rng, int samples = 40,
                               float eps = 1e-3f, double tol = 1e-2, double floor = 1e-3) {
  GradCheck r;
  Tensor probe = x;
  const int n = static_cast<int>(x.size());
  for (int s = 0; s < std::min(samples, n); ++s) {
    const std::size_t i = samples >= n ? static_cast<std::size_t>(s) : rng.Below(n);
    const float saved = probe[i];
    probe[i] = saved + eps;
    const double up = loss(probe);
    probe[i] = saved - eps;
    const double down = loss(probe);
    probe[i] = saved;
    const double numeric = (up - down) / (2.0 * static_cast<double>(eps));
    const double a = analytic[i];
    const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
    r.worst = std::max(r.worst, err);
    ++r.checked;
    if (err < tol) ++r.passed;
  }
  return r;
}

// Scalar loss sum_i out_i * weights_i in double; the upstream gradient of
// that loss is `weights` itself.
inline double Project(const Tensor& out, const Tensor& weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += static_cast<double>(out[i]) * weights[i];
  return s;
}

}  // namespace gdnn::testing

#endif  // GDNN_TESTS_ORACLES_H_
