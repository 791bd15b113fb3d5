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

#include <gtest/gtest.h>

#include "camforge/harness.hpp"
#include "camforge/localize.hpp"
#include "camforge/pipeline.hpp"
#include "test_util.hpp"

namespace camforge {
namespace {

using localize::Connectivity;
using localize::largest_region;
using localize::threshold_map;

std::size_t popcount(const BinaryMap& m) {
  std::size_t n = 0;
  for (auto v : m.values()) n += v;
  return n;
}

TEST(Threshold, HandComputedExample) {
  EXPECT_EQ(threshold_map(ScoreMap::from_rows({{0.1, 0.5}, {0.9, 1.0}}), 0.3),
            BinaryMap::from_rows({{0, 1}, {1, 1}}));
  // The cut is strict: 0.3 * 1.0 itself is background.
  EXPECT_EQ(threshold_map(ScoreMap::from_rows({{0.3, 1.0}}), 0.3), BinaryMap::from_rows({{0, 1}}));
}

TEST(Threshold, NonPositiveMaxGivesEmptyMap) {
  EXPECT_EQ(threshold_map(ScoreMap({3, 3}, 0.0), 0.5), BinaryMap({3, 3}, 0));
  EXPECT_EQ(threshold_map(ScoreMap::from_rows({{-1, -2}}), 0.5), BinaryMap({1, 2}, 0));
}

TEST(Threshold, ThetaRange) {
  const ScoreMap s({2, 2}, 1.0);
  for (double bad : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_CAMFORGE_ERROR(threshold_map(s, bad), Errc::out_of_range);
  }
}

TEST(Threshold, ScaleInvariant) {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const ScoreMap s = test::random_map(rng, {9, 9}, -0.5, 1.0);
    const double a = std::ldexp(1.0, static_cast<int>(rng.below(20)) - 10);  // exact powers of two
    ScoreMap scaled(s.dims(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) scaled[i] = a * s[i];
    const double theta = rng.uniform(0.05, 0.95);
    EXPECT_EQ(threshold_map(scaled, theta), threshold_map(s, theta));
  }
}

TEST(Union, Properties) {
  Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    const auto a = harness::random_map(rng.below(1u << 30), {6, 5}, 0.4);
    const auto b = harness::random_map(rng.below(1u << 30), {6, 5}, 0.4);
    const auto u = localize::union_maps(a, b);
    EXPECT_EQ(u, localize::union_maps(b, a));
    EXPECT_EQ(localize::union_maps(a, a), a);
    for (std::size_t i = 0; i < u.size(); ++i) {
      EXPECT_EQ(u[i], (a[i] || b[i]) ? 1 : 0);
    }
  }
  EXPECT_CAMFORGE_ERROR(localize::union_maps(BinaryMap({2, 2}), BinaryMap({2, 3})), Errc::dim_mismatch);
}

TEST(LargestRegion, PicksBiggerComponent) {
  const auto m = BinaryMap::from_rows({
      {1, 1, 0, 0, 0},
      {1, 0, 0, 1, 1},
      {0, 0, 0, 1, 1},
      {0, 0, 0, 0, 1},
  });
  EXPECT_EQ(largest_region(m), BinaryMap::from_rows({
                                   {0, 0, 0, 0, 0},
                                   {0, 0, 0, 1, 1},
                                   {0, 0, 0, 1, 1},
                                   {0, 0, 0, 0, 1},
                               }));
}

TEST(LargestRegion, DiagonalDependsOnConnectivity) {
  const auto diag = BinaryMap::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(largest_region(diag, Connectivity::eight), diag);
  EXPECT_EQ(popcount(largest_region(diag, Connectivity::four)), 1u);
  EXPECT_EQ(largest_region(diag, Connectivity::four), BinaryMap::from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
}

TEST(LargestRegion, TieGoesToFirstInScanOrder) {
  const auto m = BinaryMap::from_rows({{0, 0, 1, 1}, {1, 1, 0, 0}});
  // Under 4-connectivity both pairs have size 2; the one at (0,2) comes first.
  EXPECT_EQ(largest_region(m, Connectivity::four), BinaryMap::from_rows({{0, 0, 1, 1}, {0, 0, 0, 0}}));
}

TEST(LargestRegion, EmptyAndFull) {
  EXPECT_EQ(largest_region(BinaryMap({4, 4}, 0)), BinaryMap({4, 4}, 0));
  EXPECT_EQ(largest_region(BinaryMap({4, 4}, 1)), BinaryMap({4, 4}, 1));
}

TEST(LargestRegion, MatchesFloodFillOracle) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Dims2 dims{1 + seed % 23, 1 + (seed * 7) % 29};
    const auto m = harness::random_map(seed, dims, 0.3 + 0.1 * static_cast<double>(seed % 5));
    for (auto conn : {Connectivity::four, Connectivity::eight}) {
      ASSERT_EQ(largest_region(m, conn), harness::oracle_largest_region(m, conn)) << "seed " << seed;
    }
  }
}

TEST(LargestRegion, ResultIsSubsetAndIdempotent) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = harness::random_map(seed, {12, 12}, 0.5);
    const auto r = largest_region(m, Connectivity::four);
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_LE(r[i], m[i]);
    EXPECT_EQ(largest_region(r, Connectivity::four), r);
  }
}

TEST(RegionBox, ScalesIntoImageCoordinates) {
  BinaryMap m({4, 4}, 0);
  m(1, 1) = 1;
  m(2, 3) = 1;
  EXPECT_EQ(localize::region_bbox(m, {8, 8}), (BoundingBox{2, 2, 8, 6}));
  EXPECT_CAMFORGE_ERROR(localize::region_bbox(BinaryMap({4, 4}, 0), {8, 8}), Errc::no_region);
}

TEST(Localize, FallsBackToFullImage) {
  const auto loc = localize::localize(ScoreMap({4, 4}, 0.0), ScoreMap({4, 4}, -1.0), {10, 20});
  EXPECT_TRUE(loc.fallback_used);
  EXPECT_EQ(loc.box, (BoundingBox{0, 0, 20, 10}));
}

TEST(Localize, UnionOfBothSlices) {
  ScoreMap s_l({4, 4}, 0.0), s_f({4, 4}, 0.0);
  s_l(1, 1) = 1.0;
  s_f(1, 2) = 1.0;
  s_f(2, 2) = 1.0;
  const auto loc = localize::localize(s_l, s_f, {4, 4});
  EXPECT_FALSE(loc.fallback_used);
  EXPECT_EQ(loc.box, (BoundingBox{1, 1, 3, 3}));
  EXPECT_CAMFORGE_ERROR(localize::localize(s_l, ScoreMap({4, 5}), {4, 4}), Errc::dim_mismatch);
}

TEST(Localize, GaussianLevelSetWithinOneCell) {
  Rng rng(43);
  for (int t = 0; t < 200; ++t) {
    const Dims2 cam{16, 16};
    harness::Blob b;
    b.kind = harness::BlobKind::gaussian;
    b.sigma = rng.uniform(0.8, 3.0);
    b.cx = static_cast<double>(4 + rng.below(8)) + 0.5;
    b.cy = static_cast<double>(4 + rng.below(8)) + 0.5;
    const double theta = rng.uniform(0.1, 0.8);
    const ScoreMap s = harness::render_blob(cam, b);
    const auto loc = localize::localize(s, s, cam, {theta, Connectivity::eight});
    const auto want = harness::blob_cam_box(cam, b, theta);
    EXPECT_LE(std::abs(loc.box.x0 - want.x0), 1.0);
    EXPECT_LE(std::abs(loc.box.y0 - want.y0), 1.0);
    EXPECT_LE(std::abs(loc.box.x1 - want.x1), 1.0);
    EXPECT_LE(std::abs(loc.box.y1 - want.y1), 1.0);
  }
}

TEST(Pipeline, RanksByGapAndLocalizesEachClass) {
  Tensor3 cam({3, 4, 4}, 0.0);
  cam(2, 0, 0) = 4.0;  // strongest class
  cam(0, 3, 3) = 1.0;
  const auto p = pipeline::predict("x", cam, cam, {8, 8}, 5);
  EXPECT_EQ(p.prediction.ranked_classes, (std::vector<std::size_t>{2, 0, 1}));
  EXPECT_EQ(p.prediction.box_per_class.at(2), (BoundingBox{0, 0, 2, 2}));
  EXPECT_EQ(p.prediction.box_per_class.at(0), (BoundingBox{6, 6, 8, 8}));
  EXPECT_EQ(p.fallback_classes, (std::vector<std::size_t>{1}));
  EXPECT_EQ(pipeline::predict("x", cam, cam, {8, 8}, 1).prediction.ranked_classes, (std::vector<std::size_t>{2}));
}

}  // namespace
}  // namespace camforge
