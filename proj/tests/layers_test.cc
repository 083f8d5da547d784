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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "gdnn/errors.h"
#include "gdnn/layers.h"
#include "gdnn/random.h"
#include "gdnn/sgd.h"
#include "oracles.h"

namespace gdnn {
namespace {

using testing::CheckGradient;
using testing::ConvOracle;
using testing::Project;
using testing::RandomTensor;

constexpr int kInstances = 6;
constexpr double kMinPassRate = 0.95;

// ---- forward vs loop oracles ------------------------------------------------

TEST(ConvForwardTest, MatchesLoopOracleBitExactly) {
  Rng rng(11);
  const ConvSpec specs[] = {{3, 1, 0, 3, 16}, {5, 1, 2, 16, 16}, {3, 1, 1, 16, 16},
                            {3, 2, 1, 4, 5},  {1, 1, 0, 2, 3},   {4, 3, 2, 3, 2}};
  for (const ConvSpec& s : specs) {
    for (int rep = 0; rep < 3; ++rep) {
      const int h = 7 + static_cast<int>(rng.Below(9)), w = 7 + static_cast<int>(rng.Below(9));
      Tensor in = RandomTensor({s.in_channels, h, w}, rng);
      Tensor wt = RandomTensor({s.out_channels, s.in_channels, s.kernel, s.kernel}, rng);
      Tensor b = RandomTensor({s.out_channels}, rng);
      Tensor got = Conv2dForward(in, wt, b, s);
      Tensor want = ConvOracle(in, wt, b, s);
      ASSERT_EQ(got.dims(), want.dims());
      EXPECT_TRUE(got.BitEqual(want)) << "kernel " << s.kernel << " stride " << s.stride;
    }
  }
}

TEST(ConvForwardTest, SingleChannelExample) {
  // 1x3x3 ramp, 2x2 ones kernel, no padding.
  Tensor in({1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Tensor w({1, 1, 2, 2}, {1, 1, 1, 1});
  Tensor b({1}, {0.5f});
  Tensor out = Conv2dForward(in, w, b, {2, 1, 0, 1, 1});
  ASSERT_EQ(out.dims(), (std::vector<int>{1, 2, 2}));
  EXPECT_EQ(out[0], 12.5f);
  EXPECT_EQ(out[1], 16.5f);
  EXPECT_EQ(out[2], 24.5f);
  EXPECT_EQ(out[3], 28.5f);
}

TEST(ConvForwardTest, RejectsMismatchedShapes) {
  Rng rng(2);
  Tensor in = RandomTensor({3, 8, 8}, rng);
  Tensor w = RandomTensor({4, 2, 3, 3}, rng);
  Tensor b = RandomTensor({4}, rng);
  EXPECT_THROW(Conv2dForward(in, w, b, {3, 1, 0, 3, 4}), DimensionError);
  Tensor small = RandomTensor({3, 2, 2}, rng);
  Tensor w3 = RandomTensor({4, 3, 3, 3}, rng);
  EXPECT_THROW(Conv2dForward(small, w3, b, {3, 1, 0, 3, 4}), DimensionError);
}

TEST(ReluForwardTest, MatchesOracle) {
  Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    Tensor in = RandomTensor({4, 6, 5}, rng);
    in[0] = 0.0f;
    EXPECT_TRUE(ReluForward(in).BitEqual(testing::ReluOracle(in)));
  }
}

TEST(LrnForwardTest, MatchesOracleWithinTolerance) {
  Rng rng(4);
  const LrnSpec specs[] = {{5, 1e-4f, 0.75f, 1.0f}, {3, 0.5f, 0.75f, 2.0f}, {5, 2.0f, 0.5f, 1.0f}};
  for (const LrnSpec& s : specs) {
    for (int rep = 0; rep < 3; ++rep) {
      Tensor in = RandomTensor({7, 4, 5}, rng, -3.0f, 3.0f);
      Tensor got = LrnForward(in, s);
      Tensor want = testing::LrnOracle(in, s);
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_LE(std::abs(got[i] - want[i]), 1e-6 * std::max(1.0f, std::abs(want[i]))) << i;
      }
    }
  }
}

TEST(LrnForwardTest, ZeroAlphaIsIdentityWithUnitK) {
  Rng rng(5);
  Tensor in = RandomTensor({6, 3, 3}, rng);
  Tensor out = LrnForward(in, {5, 0.0f, 0.75f, 1.0f});
  EXPECT_TRUE(out.BitEqual(in));
}

TEST(LrnForwardTest, RejectsEvenWindow) {
  Tensor in({2, 2, 2});
  EXPECT_THROW(LrnForward(in, {4, 1e-4f, 0.75f, 1.0f}), ConfigError);
}

TEST(MaxPoolForwardTest, MatchesOracleIncludingArgmax) {
  Rng rng(6);
  const PoolSpec specs[] = {{4, 1}, {3, 2}, {2, 2}};
  for (const PoolSpec& s : specs) {
    Tensor in = RandomTensor({5, 13, 13}, rng);
    MaxPoolContext ctx;
    Tensor got = MaxPoolForward(in, s, &ctx);
    auto want = testing::MaxPoolOracle(in, s);
    EXPECT_TRUE(got.BitEqual(want.out));
    ASSERT_EQ(ctx.argmax.size(), want.argmax.size());
    for (std::size_t i = 0; i < want.argmax.size(); ++i) EXPECT_EQ(ctx.argmax[i], want.argmax[i]);
  }
}

TEST(MaxPoolForwardTest, TiesGoToFirstIndex) {
  Tensor in({1, 2, 2}, {1, 1, 1, 1});
  MaxPoolContext ctx;
  MaxPoolForward(in, {2, 2}, &ctx);
  EXPECT_EQ(ctx.argmax[0], 0);
}

TEST(MaxPoolForwardTest, WindowLargerThanInputIsDimensionError) {
  Tensor in({1, 2, 2});
  EXPECT_THROW(MaxPoolForward(in, {3, 2}), DimensionError);
}

TEST(FcForwardTest, MatchesOracleBitExactly) {
  Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const int d = 1 + static_cast<int>(rng.Below(700)), o = 1 + static_cast<int>(rng.Below(12));
    Tensor in = RandomTensor({d}, rng);
    Tensor w = RandomTensor({o, d}, rng);
    Tensor b = RandomTensor({o}, rng);
    EXPECT_TRUE(FcForward(in, w, b).BitEqual(testing::FcOracle(in, w, b))) << d;
  }
}

TEST(FcForwardTest, LeadingColumnsIgnoreTheRest) {
  Rng rng(8);
  Tensor w = RandomTensor({10, 40}, rng);
  Tensor b = RandomTensor({10}, rng);
  Tensor in = RandomTensor({40}, rng);
  for (int i = 24; i < 40; ++i) in[i] = 0.0f;
  Tensor lead({24}, std::vector<float>(in.data(), in.data() + 24));
  Tensor masked = w;
  for (int o = 0; o < 10; ++o) {
    for (int d = 24; d < 40; ++d) masked[o * 40 + d] = 0.0f;
  }
  Tensor got = FcForwardLeadingColumns(lead.values(), w, b);
  EXPECT_TRUE(got.BitEqual(FcForward(in, masked, b)));
}

TEST(SoftmaxTest, MatchesOracleAndSumsToOne) {
  Rng rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    Tensor logits = RandomTensor({10}, rng, -30.0f, 30.0f);
    Tensor p = Softmax(logits);
    auto want = testing::SoftmaxOracle(logits);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_LE(std::abs(p[i] - want[i]), 1e-6 * std::max(want[i], 1e-30) + 1e-12);
      sum += p[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(SoftmaxTest, LargeLogitsStayFinite) {
  Tensor logits({3}, {1000.0f, 999.0f, -1000.0f});
  Tensor p = Softmax(logits);
  EXPECT_TRUE(p.AllFinite());
  EXPECT_GT(p[0], p[1]);
}

TEST(CrossEntropyTest, GradientIsProbsMinusOneHot) {
  Tensor probs({3}, {0.2f, 0.5f, 0.3f});
  LossAndGrad lg = CrossEntropyLoss(probs, 1);
  EXPECT_NEAR(lg.loss, -std::log(0.5), 1e-6);
  EXPECT_FLOAT_EQ(lg.grad_logits[0], 0.2f);
  EXPECT_FLOAT_EQ(lg.grad_logits[1], -0.5f);
  EXPECT_FLOAT_EQ(lg.grad_logits[2], 0.3f);
  EXPECT_THROW(CrossEntropyLoss(probs, 3), InputError);
  EXPECT_THROW(CrossEntropyLoss(probs, -1), InputError);
}

TEST(CrossEntropyTest, ZeroProbabilityIsFinite) {
  Tensor probs({2}, {1.0f, 0.0f});
  EXPECT_TRUE(std::isfinite(CrossEntropyLoss(probs, 1).loss));
}

// ---- backward vs central differences ---------------------------------------

void ExpectGradOk(const testing::GradCheck& r, const char* what) {
  EXPECT_GE(r.PassRate(), kMinPassRate) << what << ": " << r.passed << "/" << r.checked
                                        << " worst " << r.worst;
}

TEST(ConvBackwardTest, AgreesWithFiniteDifferences) {
  Rng rng(21);
  for (int inst = 0; inst < kInstances; ++inst) {
    const ConvSpec s{inst % 2 ? 5 : 3, inst == 3 ? 2 : 1, inst % 3, 3, 4};
    Tensor in = RandomTensor({3, 9, 8}, rng);
    Tensor w = RandomTensor({4, 3, s.kernel, s.kernel}, rng);
    Tensor b = RandomTensor({4}, rng);
    ConvContext ctx;
    Tensor out = Conv2dForward(in, w, b, s, &ctx);
    Tensor up = RandomTensor(out.dims(), rng);
    ConvGrads g = Conv2dBackward(ctx, w, up);
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(Conv2dForward(x, w, b, s), up); },
                               in, g.input, rng), "input");
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(Conv2dForward(in, x, b, s), up); },
                               w, g.weights, rng), "weights");
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(Conv2dForward(in, w, x, s), up); },
                               b, g.bias, rng), "bias");
  }
}

TEST(ConvBackwardTest, WithoutForwardIsStateError) {
  ConvContext ctx;
  Tensor w({1, 1, 3, 3}), g({1, 1, 1});
  EXPECT_THROW(Conv2dBackward(ctx, w, g), StateError);
}

TEST(ReluBackwardTest, AgreesWithFiniteDifferences) {
  Rng rng(22);
  for (int inst = 0; inst < kInstances; ++inst) {
    Tensor in = RandomTensor({3, 5, 5}, rng);
    ReluContext ctx;
    Tensor out = ReluForward(in, &ctx);
    Tensor up = RandomTensor(out.dims(), rng);
    Tensor g = ReluBackward(ctx, up);
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(ReluForward(x), up); }, in, g, rng),
                 "relu");
  }
}

TEST(ReluBackwardTest, ZeroWhereOutputNotPositive) {
  Tensor in({1, 1, 3}, {-1.0f, 0.0f, 2.0f});
  ReluContext ctx;
  ReluForward(in, &ctx);
  Tensor g = ReluBackward(ctx, Tensor({1, 1, 3}, {5.0f, 5.0f, 5.0f}));
  EXPECT_EQ(g[0], 0.0f);
  EXPECT_EQ(g[1], 0.0f);
  EXPECT_EQ(g[2], 5.0f);
}

TEST(LrnBackwardTest, AgreesWithFiniteDifferences) {
  Rng rng(23);
  for (int inst = 0; inst < kInstances; ++inst) {
    // A large alpha makes the cross-channel terms visible to the check.
    const LrnSpec s{inst % 2 ? 3 : 5, inst < 3 ? 0.5f : 1e-4f, 0.75f, inst % 3 ? 1.0f : 2.0f};
    Tensor in = RandomTensor({6, 3, 4}, rng, -2.0f, 2.0f);
    LrnContext ctx;
    Tensor out = LrnForward(in, s, &ctx);
    Tensor up = RandomTensor(out.dims(), rng);
    Tensor g = LrnBackward(ctx, up);
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(LrnForward(x, s), up); }, in, g, rng),
                 "lrn");
  }
}

TEST(MaxPoolBackwardTest, AgreesWithFiniteDifferences) {
  Rng rng(24);
  for (int inst = 0; inst < kInstances; ++inst) {
    const PoolSpec s = inst % 2 ? PoolSpec{3, 2} : PoolSpec{4, 1};
    Tensor in = RandomTensor({3, 9, 9}, rng);
    MaxPoolContext ctx;
    Tensor out = MaxPoolForward(in, s, &ctx);
    Tensor up = RandomTensor(out.dims(), rng);
    Tensor g = MaxPoolBackward(ctx, up);
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(MaxPoolForward(x, s), up); }, in, g, rng),
                 "pool");
  }
}

TEST(MaxPoolBackwardTest, OverlappingWindowsAccumulate) {
  Tensor in({1, 2, 3}, {0.0f, 9.0f, 1.0f, 0.0f, 0.0f, 0.0f});
  MaxPoolContext ctx;
  MaxPoolForward(in, {2, 1}, &ctx);
  Tensor g = MaxPoolBackward(ctx, Tensor({1, 1, 2}, {1.0f, 2.0f}));
  EXPECT_EQ(g[1], 3.0f);
  EXPECT_EQ(g[0], 0.0f);
  EXPECT_EQ(g[2], 0.0f);
  EXPECT_TRUE(std::all_of(g.data() + 3, g.data() + 6, [](float v) { return v == 0.0f; }));
}

TEST(FcBackwardTest, AgreesWithFiniteDifferences) {
  Rng rng(25);
  for (int inst = 0; inst < kInstances; ++inst) {
    Tensor in = RandomTensor({37}, rng);
    Tensor w = RandomTensor({10, 37}, rng);
    Tensor b = RandomTensor({10}, rng);
    FcContext ctx;
    FcForward(in, w, b, &ctx);
    Tensor up = RandomTensor({10}, rng);
    FcGrads g = FcBackward(ctx, w, up);
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(FcForward(x, w, b), up); }, in, g.input, rng),
                 "input");
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(FcForward(in, x, b), up); }, w, g.weights, rng),
                 "weights");
    ExpectGradOk(CheckGradient([&](const Tensor& x) { return Project(FcForward(in, w, x), up); }, b, g.bias, rng),
                 "bias");
  }
}

TEST(SoftmaxCrossEntropyTest, GradientAgreesWithFiniteDifferences) {
  Rng rng(26);
  for (int inst = 0; inst < kInstances; ++inst) {
    Tensor logits = RandomTensor({10}, rng, -3.0f, 3.0f);
    const int label = static_cast<int>(rng.Below(10));
    Tensor g = CrossEntropyLoss(Softmax(logits), label).grad_logits;
    auto loss = [&](const Tensor& x) {
      auto p = testing::SoftmaxOracle(x);
      return -std::log(p[label]);
    };
    ExpectGradOk(CheckGradient(loss, logits, g, rng), "softmax+xent");
  }
}

// ---- sgd -----------------------------------------------------------------------

TEST(SgdTest, PlainStep) {
  Tensor p({1}, {1.0f});
  GradBuffer buf(p);
  buf.grad[0] = 0.5f;
  SgdStep(p, buf, 0.1f, 0.0f);
  EXPECT_FLOAT_EQ(p[0], 0.95f);
}

TEST(SgdTest, MomentumAccumulates) {
  Tensor p({1}, {0.0f});
  GradBuffer buf(p);
  buf.grad[0] = 1.0f;
  SgdStep(p, buf, 1.0f, 0.9f);
  SgdStep(p, buf, 1.0f, 0.9f);
  // v1 = 1, v2 = 1.9
  EXPECT_FLOAT_EQ(buf.velocity[0], 1.9f);
  EXPECT_FLOAT_EQ(p[0], -2.9f);
}

TEST(SgdTest, FrozenTensorIsUntouched) {
  Tensor p({2}, {1.0f, 2.0f});
  GradBuffer buf(p);
  buf.grad.Fill(3.0f);
  SgdStep(p, buf, 0.5f, 0.9f, /*frozen=*/true);
  EXPECT_EQ(p[0], 1.0f);
  EXPECT_EQ(p[1], 2.0f);
  EXPECT_TRUE(buf.velocity.AllZero());
}

TEST(TensorTest, NonPositiveDimIsDimensionError) {
  EXPECT_THROW(Tensor({2, 0}), DimensionError);
  EXPECT_THROW(Tensor({-1}), DimensionError);
  EXPECT_THROW(Tensor({2}, {1.0f}), DimensionError);
}

}  // namespace
}  // namespace gdnn
