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

// Built-in oracle checks run by `camforge selftest`.

#ifndef CAMFORGE_SELFTEST_HPP_
#define CAMFORGE_SELFTEST_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "camforge/cam_core.hpp"
#include "camforge/coaug.hpp"
#include "camforge/confseg.hpp"
#include "camforge/evaluate.hpp"
#include "camforge/harness.hpp"
#include "camforge/localize.hpp"
#include "camforge/pipeline.hpp"
#include "camforge/random.hpp"

namespace camforge::selftest {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline ScoreMap random_map(Rng& rng, Dims2 dims) {
  ScoreMap s(dims, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = rng.normal();
  return s;
}

inline CheckResult threshold_equivalence() {
  Rng rng(101);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const ScoreMap s = random_map(rng, {32, 32});
    const auto cm = confseg::confidence_mask(s);
    const auto xi = confseg::spg_thresholds(cm);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool spg = s[i] > xi.xi1 || s[i] < xi.xi2;
      mismatches += (cm.binary[i] == 1) != spg;
    }
  }
  return {"confseg_threshold_equivalence", mismatches == 0, std::to_string(mismatches) + " mismatched pixels"};
}

inline CheckResult affine_invariance() {
  Rng rng(202);
  std::size_t failures = 0;
  for (int t = 0; t < 100; ++t) {
    const ScoreMap s = random_map(rng, {32, 32});
    double a = 0.0;
    while (a == 0.0) a = 10.0 * (1.0 - rng.uniform());  // (0, 10]
    const double b = rng.uniform(-10.0, 10.0);
    ScoreMap t_s(s.dims(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) t_s[i] = a * s[i] + b;
    failures += confseg::confidence_mask(s).binary != confseg::confidence_mask(t_s).binary;
  }
  return {"confseg_affine_invariance", failures == 0, std::to_string(failures) + " of 100 maps changed"};
}

inline CheckResult grad_softmax() {
  Rng rng(303);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> z(2 + rng.below(9));
    for (auto& v : z) v = rng.normal(0.0, 3.0);
    const std::size_t target = rng.below(z.size());
    const auto res = softmax_cross_entropy(std::span<const double>(z), target);
    worst = std::max(worst, harness::grad_check(
                                [&](std::span<const double> x) { return softmax_cross_entropy(x, target).loss; }, z,
                                res.grad));
  }
  return {"grad_softmax_cross_entropy", worst <= 1e-4, "max rel err " + sci(worst)};
}

inline CheckResult grad_inner() {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto inst = harness::make_inner_instance(400 + t, {8, 8}, 10 * h);
    const auto res = confseg::inner_loss(inst.s_f, inst.s_l, inst.mask);
    auto loss_f = [&](std::span<const double> x) {
      return confseg::inner_loss(ScoreMap(inst.s_f.dims(), {x.begin(), x.end()}), inst.s_l, inst.mask).loss;
    };
    auto loss_l = [&](std::span<const double> x) {
      return confseg::inner_loss(inst.s_f, ScoreMap(inst.s_l.dims(), {x.begin(), x.end()}), inst.mask).loss;
    };
    worst = std::max(worst, harness::grad_check(loss_f, inst.s_f.values(), res.grad_f.values(), h));
    worst = std::max(worst, harness::grad_check(loss_l, inst.s_l.values(), res.grad_l.values(), h));
  }
  return {"grad_inner_loss", worst <= 1e-4, "max rel err " + sci(worst)};
}

inline CheckResult grad_coaug() {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    coaug::CoaugParams params{0.5 + 0.01 * static_cast<double>(t), 1.5, 1e-8, t % 2 == 0};
    const auto batch = harness::make_coaug_instance(500 + t, 6, 3, 8, params, 10 * h);
    const auto res = coaug::coaug_loss(batch);
    auto f = [&](std::span<const double> x) {
      auto b = batch;
      harness::unflatten(x, b);
      return coaug::coaug_loss(b).loss;
    };
    worst = std::max(worst, harness::grad_check(f, harness::flatten(batch), harness::flatten(res.grads), h));
  }
  return {"grad_coaug_loss", worst <= 1e-4, "max rel err " + sci(worst)};
}

inline CheckResult components_oracle() {
  std::size_t mismatches = 0;
  std::size_t maps = 0;
  std::vector<BinaryMap> cases;
  for (std::uint64_t t = 0; t < 500; ++t) {
    cases.push_back(harness::random_map(600 + t, {64, 64}, 0.2 + 0.5 * static_cast<double>(t % 5) / 5.0));
  }
  for (Dims2 d : {Dims2{64, 64}, Dims2{17, 23}}) {
    cases.push_back(harness::spiral_map(d));
    cases.push_back(harness::comb_map(d));
    cases.push_back(harness::checkerboard_map(d));
  }
  for (const auto& m : cases) {
    for (auto conn : {localize::Connectivity::four, localize::Connectivity::eight}) {
      ++maps;
      mismatches += localize::largest_region(m, conn) != harness::oracle_largest_region(m, conn);
    }
  }
  return {"components_oracle", mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(maps) + " differ"};
}

inline CheckResult iou_properties() {
  const double anchor = evaluate::iou({0, 0, 2, 2}, {1, 1, 3, 3});
  bool ok = std::abs(anchor - 1.0 / 7.0) <= 1e-12;
  Rng rng(707);
  double worst = 0.0;
  auto random_box = [&] {
    const double x0 = rng.uniform(0, 10), y0 = rng.uniform(0, 10);
    return BoundingBox{x0, y0, x0 + rng.uniform(0.1, 5), y0 + rng.uniform(0.1, 5)};
  };
  for (int t = 0; t < 1000; ++t) {
    const BoundingBox a = random_box(), b = random_box();
    const double s = rng.uniform(0.1, 10);
    const BoundingBox as{a.x0 * s, a.y0 * s, a.x1 * s, a.y1 * s}, bs{b.x0 * s, b.y0 * s, b.x1 * s, b.y1 * s};
    ok = ok && evaluate::iou(a, b) == evaluate::iou(b, a);
    worst = std::max(worst, std::abs(evaluate::iou(a, b) - evaluate::iou(as, bs)));
  }
  ok = ok && worst <= 1e-12;
  return {"iou_properties", ok, "anchor " + sci(anchor) + ", scale drift " + sci(worst)};
}

inline double synthetic_gt_known_error(double noise) {
  harness::SynthSpec spec;
  spec.n_images = 200;
  spec.noise_sigma = noise;
  spec.seed = 808;
  const auto data = harness::generate(spec);
  std::vector<evaluate::Prediction> preds;
  for (const auto& d : data) preds.push_back(pipeline::predict(d.id, d.cam_l, d.cam_f, spec.image_size).prediction);
  return evaluate::evaluate(preds, harness::ground_truth(data)).gt_known_err;
}

inline CheckResult synthetic_end_to_end() {
  const double clean = synthetic_gt_known_error(0.0);
  const double noisy = synthetic_gt_known_error(0.5);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "gt_known_err %.2f (clean) %.2f (sigma 0.5)", clean, noisy);
  return {"synthetic_end_to_end", clean == 0.0 && noisy > clean, buf};
}

inline CheckResult descent_inner() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto traj = harness::descend_inner(harness::make_inner_instance(900 + t, {16, 16}), {2000, 0.1, 0.99});
    worst = std::max(worst, traj.back());
  }
  return {"descent_inner", worst < 1e-3, "worst final masked L1 " + sci(worst)};
}

inline CheckResult descent_coaug() {
  const auto traj = harness::descend_coaug(harness::make_pull_instance(1000), 100, 0.01);
  bool decreasing = true;
  for (std::size_t i = 1; i < traj.pair_distance.size(); ++i) {
    decreasing = decreasing && traj.pair_distance[i] < traj.pair_distance[i - 1];
  }
  return {"descent_coaug", decreasing,
          "pair distance " + sci(traj.pair_distance.front()) + " -> " + sci(traj.pair_distance.back())};
}

inline CheckResult metric_fixture() {
  using evaluate::GroundTruth;
  using evaluate::Prediction;
  // a: rank-1 hit, IoU 0.6.  b: rank-3 hit, IoU 1.  c: rank-1, IoU exactly 0.5.
  // d: class missed entirely.
  const std::vector<GroundTruth> gts = {
      {"a", 1, {{0, 0, 10, 10}}}, {"b", 2, {{0, 0, 4, 4}}}, {"c", 0, {{0, 0, 4, 4}}}, {"d", 3, {{0, 0, 4, 4}}}};
  const std::vector<Prediction> preds = {
      {"a", {1, 0}, {{1, {0, 0, 6, 10}}}},
      {"b", {0, 1, 2}, {{2, {0, 0, 4, 4}}}},
      {"c", {0}, {{0, {0, 0, 4, 2}}}},
      {"d", {0}, {{0, {0, 0, 4, 4}}, {3, {0, 0, 4, 4}}}},
  };
  const auto r = evaluate::evaluate(preds, gts);
  // top1 loc: a -> 75.00; top5 loc: a, b -> 50.00; gt-known: a, b, d -> 25.00
  // top1 cls: a, c -> 50.00; top5 cls: a, b, c -> 25.00
  const bool ok = r.top1_loc_err == 75.0 && r.top5_loc_err == 50.0 && r.gt_known_err == 25.0 &&
                  r.top1_cls_err == 50.0 && r.top5_cls_err == 25.0 && r.n == 4;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.2f/%.2f/%.2f/%.2f/%.2f", r.top1_loc_err, r.top5_loc_err, r.gt_known_err,
                r.top1_cls_err, r.top5_cls_err);
  return {"metric_fixture", ok, buf};
}

}  // namespace detail

inline std::vector<std::function<CheckResult()>> checks() {
  return {detail::threshold_equivalence, detail::affine_invariance, detail::grad_softmax,
          detail::grad_inner,            detail::grad_coaug,        detail::components_oracle,
          detail::iou_properties,        detail::synthetic_end_to_end, detail::descent_inner,
          detail::descent_coaug,         detail::metric_fixture};
}

inline std::vector<CheckResult> run_all() {
  std::vector<CheckResult> out;
  for (const auto& check : checks()) out.push_back(check());
  return out;
}

}  // namespace camforge::selftest

#endif  // CAMFORGE_SELFTEST_HPP_
