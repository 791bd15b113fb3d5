// Copyright 2026 The camforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "camforge/cam_core.hpp"
#include "camforge/harness.hpp"
#include "test_util.hpp"

namespace camforge {
namespace {

TEST(Tensor, RejectsNonFiniteAndZeroDims) {
  EXPECT_CAMFORGE_ERROR(Tensor3({1, 1, 1}, std::vector<double>{std::nan("")}), Errc::non_finite);
  EXPECT_CAMFORGE_ERROR(Tensor3({1, 1, 1}, std::vector<double>{std::numeric_limits<double>::infinity()}),
                        Errc::non_finite);
  EXPECT_CAMFORGE_ERROR(Tensor3({0, 2, 2}), Errc::invalid_argument);
  EXPECT_CAMFORGE_ERROR(ScoreMap({2, 2}, std::vector<double>{1, 2, 3}), Errc::dim_mismatch);
  EXPECT_CAMFORGE_ERROR(BinaryMap({1, 1}, std::vector<std::uint8_t>{2}), Errc::invalid_argument);
}

TEST(GlobalAveragePool, SingleChannelMean) {
  const Tensor3 t({1, 2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(global_average_pool(t).values, std::vector<double>{2.5});
}

TEST(GlobalAveragePool, ZeroTensor) {
  const auto g = global_average_pool(Tensor3({4, 3, 5}, 0.0));
  EXPECT_EQ(g.values, std::vector<double>(4, 0.0));
}

TEST(GlobalAveragePool, MatchesScalarLoop) {
  Rng rng(1);
  const Tensor3 t = test::random_tensor(rng, {3, 2, 2});
  const auto g = global_average_pool(t);
  for (std::size_t c = 0; c < 3; ++c) {
    long double sum = 0;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t w = 0; w < 2; ++w) sum += t(c, r, w);
    EXPECT_NEAR(g.values[c], static_cast<double>(sum / 4), 1e-12);
  }
}

TEST(GlobalAveragePool, Linear) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor3 x = test::random_tensor(rng, {3, 5, 7});
    const Tensor3 y = test::random_tensor(rng, {3, 5, 7});
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    Tensor3 z(x.dims());
    for (std::size_t i = 0; i < z.size(); ++i) z.values()[i] = a * x.values()[i] + b * y.values()[i];
    const auto gx = global_average_pool(x).values, gy = global_average_pool(y).values,
               gz = global_average_pool(z).values;
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(gz[c], a * gx[c] + b * gy[c], 1e-12);
  }
}

TEST(SliceClass, IdentityAndIndexing) {
  const Tensor3 one({1, 2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(slice_class(one, 0), ScoreMap::from_rows({{1, 2}, {3, 4}}));

  Rng rng(3);
  const Tensor3 stack = test::random_tensor(rng, {3, 4, 5});
  ScoreMap s = slice_class(stack, 2);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t w = 0; w < 5; ++w) EXPECT_EQ(s(r, w), stack(2, r, w));
  s(0, 0) = 99.0;
  EXPECT_NE(stack(2, 0, 0), 99.0);
}

TEST(SliceClass, OutOfRange) { EXPECT_CAMFORGE_ERROR(slice_class(Tensor3({3, 2, 2}), 3), Errc::out_of_range); }

TEST(SoftmaxCrossEntropy, UniformLogits) {
  const std::vector<double> z(4, 0.7);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(softmax_cross_entropy(z, t).loss, std::log(4.0), 1e-15);
}

TEST(SoftmaxCrossEntropy, DominantLogit) {
  const std::vector<double> z{10, -10};
  const auto res = softmax_cross_entropy(z, 0);
  // Direct evaluation in extended precision.
  const long double tail = std::exp(-20.0L);
  const long double loss = std::log1p(tail);
  const long double p1 = tail / (1.0L + tail);
  EXPECT_NEAR(res.loss, static_cast<double>(loss), 1e-22);
  EXPECT_NEAR(res.loss, 2.06e-9, 0.01e-9);
  EXPECT_NEAR(res.grad[0], static_cast<double>(-p1), 1e-22);
  EXPECT_NEAR(res.grad[1], static_cast<double>(p1), 1e-22);
}

TEST(SoftmaxCrossEntropy, FiniteDifferenceGradient) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> z(5);
    for (auto& v : z) v = rng.normal(0, 2);
    const std::size_t target = rng.below(5);
    const auto res = softmax_cross_entropy(z, target);
    const double h = 1e-5;
    for (std::size_t i = 0; i < z.size(); ++i) {
      auto up = z, down = z;
      up[i] += h;
      down[i] -= h;
      const double fd =
          (softmax_cross_entropy(up, target).loss - softmax_cross_entropy(down, target).loss) / (2 * h);
      EXPECT_LE(std::abs(fd - res.grad[i]) / std::max({1.0, std::abs(fd), std::abs(res.grad[i])}), 1e-6);
    }
  }
}

TEST(SoftmaxCrossEntropy, ShiftInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> z(6);
    for (auto& v : z) v = rng.normal(0, 3);
    auto shifted = z;
    const double c = rng.uniform(-50, 50);
    for (auto& v : shifted) v += c;
    EXPECT_LT(std::abs(softmax_cross_entropy(z, 2).loss - softmax_cross_entropy(shifted, 2).loss), 1e-12);
  }
}

TEST(SoftmaxCrossEntropy, Errors) {
  const std::vector<double> z{1, 2};
  EXPECT_CAMFORGE_ERROR(softmax_cross_entropy(z, 2), Errc::out_of_range);
  EXPECT_CAMFORGE_ERROR(softmax_cross_entropy(std::vector<double>{}, 0), Errc::invalid_argument);
  EXPECT_CAMFORGE_ERROR(softmax_cross_entropy(std::vector<double>{1, std::nan("")}, 0), Errc::non_finite);
}

TEST(MinmaxNormalize, Examples) {
  EXPECT_EQ(minmax_normalize(ScoreMap::from_rows({{0, 4}, {2, 1}})), ScoreMap::from_rows({{0, 1}, {0.5, 0.25}}));
  EXPECT_EQ(minmax_normalize(ScoreMap({3, 3}, 7.5)), ScoreMap({3, 3}, 0.0));
  const auto unit = ScoreMap::from_rows({{0, 0.3}, {1, 0.7}});
  EXPECT_EQ(minmax_normalize(unit), unit);
}

TEST(MinmaxNormalize, BoundsAndIdempotence) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const ScoreMap s = test::random_map(rng, {6, 9}, -1e3, 1e3);
    const ScoreMap n = minmax_normalize(s);
    for (double v : n.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(minmax_normalize(n), n);
  }
}

TEST(Resize, BilinearPreservesConstantsAndIdentity) {
  Rng rng(7);
  const ScoreMap s = test::random_map(rng, {4, 6});
  EXPECT_EQ(resize_bilinear(s, s.dims()), s);
  const ScoreMap up = resize_bilinear(ScoreMap({3, 3}, 0.25), {10, 7});
  for (double v : up.values()) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_CAMFORGE_ERROR(resize_bilinear(s, {0, 4}), Errc::invalid_argument);
}

TEST(Resize, BilinearHalfPixelOracle) {
  // 1x2 source [0, 1] upsampled to 1x4: sample points at -0.25, 0.25, 0.75, 1.25
  // in source coordinates, clamped to [0, 1].
  const auto up = resize_bilinear(ScoreMap::from_rows({{0, 1}}), {1, 4});
  EXPECT_EQ(up, ScoreMap::from_rows({{0, 0.25, 0.75, 1}}));
}

TEST(Resize, NearestReplicatesCells) {
  const auto m = BinaryMap::from_rows({{1, 0}, {0, 1}});
  const auto up = resize_nearest(m, {4, 4});
  EXPECT_EQ(up, BinaryMap::from_rows({{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}}));
  EXPECT_CAMFORGE_ERROR(resize_nearest(m, {4, 0}), Errc::invalid_argument);
}

}  // namespace
}  // namespace camforge
