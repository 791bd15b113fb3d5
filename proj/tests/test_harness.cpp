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
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "camforge/camt.hpp"
#include "camforge/harness.hpp"
#include "camforge/pipeline.hpp"
#include "test_util.hpp"

namespace camforge {
namespace {

using harness::BlobKind;
using harness::Connectivity;
using harness::SynthSpec;

TEST(Synth, DeterministicPerSeed) {
  SynthSpec spec;
  spec.n_images = 12;
  spec.noise_sigma = 0.2;
  spec.seed = 5;
  const auto a = harness::generate(spec);
  const auto b = harness::generate(spec);
  ASSERT_EQ(a.size(), 12u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].cam_l, b[i].cam_l);
    EXPECT_EQ(a[i].cam_f, b[i].cam_f);
    EXPECT_EQ(a[i].image, b[i].image);
    EXPECT_EQ(a[i].gt_box, b[i].gt_box);
  }
  spec.seed = 6;
  EXPECT_NE(harness::generate(spec)[0].cam_l, a[0].cam_l);
  // Image i is independent of n_images.
  spec.seed = 5;
  spec.n_images = 3;
  EXPECT_EQ(harness::generate(spec)[2].cam_l, a[2].cam_l);
}

TEST(Synth, ShapesAndLabels) {
  SynthSpec spec;
  spec.n_images = 40;
  spec.n_classes = 1;
  spec.image_size = {32, 48};
  spec.cam_size = {8, 12};
  for (const auto& d : harness::generate(spec)) {
    EXPECT_EQ(d.label, 0u);
    EXPECT_EQ(d.cam_l.dims(), (Dims3{1, 8, 12}));
    EXPECT_EQ(d.image.dims(), (Dims3{3, 32, 48}));
    EXPECT_TRUE(d.gt_box.valid());
    EXPECT_GE(d.gt_box.x0, 0.0);
    EXPECT_LE(d.gt_box.x1, 48.0);
    EXPECT_LE(d.gt_box.y1, 32.0);
  }
  spec.cam_size = {64, 12};
  EXPECT_CAMFORGE_ERROR(harness::generate(spec), Errc::invalid_argument);
}

TEST(Synth, NoiselessRectanglesLocalizeExactly) {
  SynthSpec spec;
  spec.n_images = 50;
  spec.seed = 3;
  for (const auto& d : harness::generate(spec)) {
    const auto p = pipeline::predict(d.id, d.cam_l, d.cam_f, spec.image_size, 5);
    EXPECT_EQ(p.prediction.ranked_classes.front(), d.label);
    EXPECT_EQ(p.prediction.box_per_class.at(d.label), d.gt_box);
  }
}

TEST(Synth, NoiselessGaussiansPassGtKnown) {
  SynthSpec spec;
  spec.n_images = 50;
  spec.kind = BlobKind::gaussian;
  spec.seed = 4;
  const auto data = harness::generate(spec);
  std::vector<evaluate::Prediction> preds;
  for (const auto& d : data) preds.push_back(pipeline::predict(d.id, d.cam_l, d.cam_f, spec.image_size).prediction);
  EXPECT_EQ(evaluate::evaluate(preds, harness::ground_truth(data)).gt_known_err, 0.0);
}

TEST(Synth, WriteDatasetLayout) {
  test::TempDir dir("harness");
  SynthSpec spec;
  spec.n_images = 3;
  const auto data = harness::generate(spec);
  harness::write_dataset(dir.path(), data);
  std::ifstream manifest(dir.path() / "manifest.jsonl");
  std::string line;
  std::size_t n = 0;
  while (std::getline(manifest, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("image_id").get<std::string>(), data[n].id);
    EXPECT_EQ(camt::read_tensor(dir.path() / j.at("cam_l").get<std::string>()), data[n].cam_l);
    EXPECT_EQ(camt::read_tensor(dir.path() / j.at("cam_f").get<std::string>()), data[n].cam_f);
    EXPECT_EQ(camt::read_tensor(dir.path() / j.at("image").get<std::string>()), data[n].image);
    ++n;
  }
  EXPECT_EQ(n, 3u);
  const auto gts = evaluate::parse_ground_truth_csv(io::read_text(dir.path() / "ground_truth.csv"));
  ASSERT_EQ(gts.size(), 3u);
  EXPECT_EQ(gts[1].boxes[0], data[1].gt_box);
}

TEST(Blob, DegenerateBlobsRejected) {
  harness::Blob r;
  r.x0 = 2;
  r.x1 = 2;
  r.y1 = 3;
  EXPECT_CAMFORGE_ERROR(harness::render_blob({4, 4}, r), Errc::degenerate_blob);
  r.x1 = 9;
  EXPECT_CAMFORGE_ERROR(harness::render_blob({4, 4}, r), Errc::degenerate_blob);
  harness::Blob g;
  g.kind = BlobKind::gaussian;
  g.cx = g.cy = 2.5;
  EXPECT_CAMFORGE_ERROR(harness::render_blob({4, 4}, g), Errc::degenerate_blob);
  g.sigma = 1.0;
  g.cx = -1;
  EXPECT_CAMFORGE_ERROR(harness::render_blob({4, 4}, g), Errc::degenerate_blob);
}

TEST(Blob, GaussianPeakAndLevelSetBox) {
  harness::Blob g;
  g.kind = BlobKind::gaussian;
  g.cx = 3.5;
  g.cy = 4.5;
  g.sigma = 1.5;
  const auto s = harness::render_blob({10, 10}, g);
  EXPECT_EQ(s(4, 3), 1.0);
  const double radius = 1.5 * std::sqrt(2.0 * std::log(1.0 / 0.3));
  EXPECT_EQ(harness::blob_cam_box({10, 10}, g, 0.3), (BoundingBox{3.5 - radius, 4.5 - radius, 3.5 + radius, 4.5 + radius}));
}

TEST(FloodFill, Examples) {
  EXPECT_TRUE(harness::flood_fill_components(BinaryMap({5, 5}, 0), Connectivity::eight).empty());
  const auto board = harness::checkerboard_map({4, 5});
  EXPECT_EQ(harness::flood_fill_components(board, Connectivity::four).size(), 10u);
  EXPECT_EQ(harness::flood_fill_components(board, Connectivity::eight).size(), 1u);
  const auto comps = harness::flood_fill_components(BinaryMap::from_rows({{1, 0, 1}, {1, 0, 0}}), Connectivity::four);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0], (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(comps[1], (std::vector<std::size_t>{2}));
}

TEST(AdversarialMaps, Structure) {
  for (Dims2 d : {Dims2{64, 64}, Dims2{17, 23}, Dims2{9, 9}}) {
    const auto spiral = harness::spiral_map(d);
    // One 4-connected corridor that never touches itself sideways.
    EXPECT_EQ(harness::flood_fill_components(spiral, Connectivity::four).size(), 1u);
    for (std::size_t r = 0; r + 1 < d.height; ++r)
      for (std::size_t c = 0; c + 1 < d.width; ++c)
        EXPECT_LT(spiral(r, c) + spiral(r + 1, c) + spiral(r, c + 1) + spiral(r + 1, c + 1), 4);
    for (auto conn : {Connectivity::four, Connectivity::eight}) {
      EXPECT_EQ(localize::largest_region(spiral, conn), harness::oracle_largest_region(spiral, conn));
      const auto comb = harness::comb_map(d);
      EXPECT_EQ(localize::largest_region(comb, conn), harness::oracle_largest_region(comb, conn));
    }
    // Free-standing comb teeth only join the spine diagonally.
    const auto comb = harness::comb_map(d);
    EXPECT_GT(harness::flood_fill_components(comb, Connectivity::four).size(),
              harness::flood_fill_components(comb, Connectivity::eight).size());
  }
}

TEST(GradCheck, SumOfSquares) {
  Rng rng(61);
  std::vector<double> x(20);
  for (auto& v : x) v = rng.normal();
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2 * x[i];
  auto f = [](std::span<const double> v) {
    double acc = 0;
    for (double a : v) acc += a * a;
    return acc;
  };
  EXPECT_LE(harness::grad_check(f, x, g), 1e-10);
  g[3] += 0.5;
  EXPECT_GT(harness::grad_check(f, x, g), 0.1);
  EXPECT_CAMFORGE_ERROR(harness::grad_check(f, x, std::vector<double>(3)), Errc::dim_mismatch);
  EXPECT_CAMFORGE_ERROR(harness::grad_check([](std::span<const double>) { return std::nan(""); }, x, g),
                        Errc::non_finite);
}

TEST(Instances, RespectMargins) {
  const auto inst = harness::make_inner_instance(7, {8, 8}, 0.05);
  for (std::size_t i = 0; i < inst.mask.size(); ++i) {
    if (inst.mask[i]) {
      EXPECT_GE(std::abs(inst.s_f[i] - inst.s_l[i]), 0.05);
    }
  }
  const auto batch = harness::make_coaug_instance(8, 6, 3, 8, {}, 0.5);
  const auto flat = harness::flatten(batch);
  EXPECT_EQ(flat.size(), 6u * 3u * 8u);
  auto copy = batch;
  for (auto& s : copy.samples) s.fg.assign(8, 0.0);
  harness::unflatten(flat, copy);
  EXPECT_EQ(harness::flatten(copy), flat);
}

TEST(Descent, InnerReachesTolerance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto traj = harness::descend_inner(harness::make_inner_instance(seed, {16, 16}), {});
    ASSERT_EQ(traj.size(), 2001u);
    EXPECT_LT(traj.back(), 1e-3);
    EXPECT_LT(traj.back(), traj.front());
  }
}

TEST(Descent, InnerFromZeroInit) {
  auto inst = harness::make_inner_instance(11, {16, 16});
  inst.s_f = ScoreMap({16, 16}, 0.0);
  EXPECT_LT(harness::descend_inner(inst, {}).back(), 1e-3);
}

TEST(Descent, InnerDivergenceDetected) {
  auto inst = harness::make_inner_instance(12, {4, 4});
  EXPECT_CAMFORGE_ERROR(harness::descend_inner(inst, {200, 1.0, 10.0}), Errc::divergence);
}

TEST(Descent, CoaugPullsSameClassTogether) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto traj = harness::descend_coaug(harness::make_pull_instance(seed), 100, 0.01);
    ASSERT_EQ(traj.pair_distance.size(), 101u);
    for (std::size_t i = 1; i < traj.pair_distance.size(); ++i) {
      EXPECT_LT(traj.pair_distance[i], traj.pair_distance[i - 1]);
    }
    EXPECT_LT(traj.loss.back(), traj.loss.front());
  }
}

TEST(Descent, ZeroInitStaysAtZero) {
  harness::InnerInstance inst{ScoreMap({8, 8}, 0.0), ScoreMap({8, 8}, 0.0), BinaryMap({8, 8}, 1)};
  for (double v : harness::descend_inner(inst, {50, 0.1, 1.0})) EXPECT_EQ(v, 0.0);
  coaug::EmbeddingBatch batch;
  for (std::size_t m = 0; m < 4; ++m) batch.samples.push_back({coaug::Vector(5, 0.0), coaug::Vector(5, 0.0), coaug::Vector(5, 0.0), m % 2});
  for (double v : harness::descend_coaug(batch, 50, 0.1).loss) EXPECT_EQ(v, 0.0);
}

TEST(Descent, DemoDispatch) {
  EXPECT_EQ(harness::descend_demo(harness::DemoLoss::inner, {10, 0.1, 0.99}, 3).size(), 11u);
  EXPECT_EQ(harness::descend_demo(harness::DemoLoss::coaug, {10, 0.01, 1.0}, 3).size(), 11u);
}

}  // namespace
}  // namespace camforge
