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

// Synthetic data, reference oracles and small optimization demos.

#ifndef CAMFORGE_HARNESS_HPP_
#define CAMFORGE_HARNESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "camforge/camt.hpp"
#include "camforge/coaug.hpp"
#include "camforge/confseg.hpp"
#include "camforge/error.hpp"
#include "camforge/evaluate.hpp"
#include "camforge/io.hpp"
#include "camforge/localize.hpp"
#include "camforge/parallel.hpp"
#include "camforge/random.hpp"
#include "camforge/tensor.hpp"

namespace camforge::harness {

using localize::Connectivity;

// ---------------------------------------------------------------------------
// Synthetic blob datasets

enum class BlobKind { rectangle, gaussian };

/// One blob placed on a CAM grid. Rectangles use half-open cell ranges;
/// Gaussians are centered on (cx, cy) in continuous CAM coordinates.
struct Blob {
  BlobKind kind = BlobKind::rectangle;
  std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double cx = 0.0, cy = 0.0, sigma = 0.0;
};

/// Blob values on the CAM grid: the rectangle indicator, or a unit-peak
/// Gaussian evaluated at cell centers.
inline ScoreMap render_blob(Dims2 cam, const Blob& blob) {
  ScoreMap out(cam, 0.0);
  if (blob.kind == BlobKind::rectangle) {
    if (blob.x1 <= blob.x0 || blob.y1 <= blob.y0 || blob.x1 > cam.width || blob.y1 > cam.height) {
      detail::fail("harness", Errc::degenerate_blob, "rectangle blob has empty support on the CAM grid");
    }
    for (std::size_t r = blob.y0; r < blob.y1; ++r)
      for (std::size_t c = blob.x0; c < blob.x1; ++c) out(r, c) = 1.0;
    return out;
  }
  if (!(blob.sigma > 0.0) || !(blob.cx >= 0.0 && blob.cx <= static_cast<double>(cam.width)) ||
      !(blob.cy >= 0.0 && blob.cy <= static_cast<double>(cam.height))) {
    detail::fail("harness", Errc::degenerate_blob, "gaussian blob needs sigma > 0 and a center on the grid");
  }
  const double inv = 1.0 / (2.0 * blob.sigma * blob.sigma);
  for (std::size_t r = 0; r < cam.height; ++r) {
    for (std::size_t c = 0; c < cam.width; ++c) {
      const double dx = static_cast<double>(c) + 0.5 - blob.cx;
      const double dy = static_cast<double>(r) + 0.5 - blob.cy;
      out(r, c) = std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
  return out;
}

/// Support box of a blob in CAM coordinates. For Gaussians this is the box
/// of the analytic level set {value > theta}, a disc of radius
/// sigma * sqrt(2 ln(1/theta)), clipped to the grid.
inline BoundingBox blob_cam_box(Dims2 cam, const Blob& blob, double theta) {
  if (blob.kind == BlobKind::rectangle) {
    return {static_cast<double>(blob.x0), static_cast<double>(blob.y0), static_cast<double>(blob.x1),
            static_cast<double>(blob.y1)};
  }
  const double radius = blob.sigma * std::sqrt(2.0 * std::log(1.0 / theta));
  return {std::max(0.0, blob.cx - radius), std::max(0.0, blob.cy - radius),
          std::min(static_cast<double>(cam.width), blob.cx + radius),
          std::min(static_cast<double>(cam.height), blob.cy + radius)};
}

struct SynthSpec {
  Dims2 image_size{64, 64};
  Dims2 cam_size{16, 16};
  std::size_t n_images = 200;
  std::size_t n_classes = 5;
  std::size_t image_channels = 3;
  BlobKind kind = BlobKind::rectangle;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  /// theta used to define Gaussian ground-truth boxes.
  double reference_theta = localize::kDefaultTheta;

  void validate() const {
    if (cam_size.height == 0 || cam_size.width == 0 || cam_size.height > image_size.height ||
        cam_size.width > image_size.width) {
      detail::fail("harness", Errc::invalid_argument, "cam_size must be >= 1 and <= image_size");
    }
    if (n_classes < 1 || n_images < 1 || image_channels < 1) {
      detail::fail("harness", Errc::invalid_argument, "need n_classes, n_images, image_channels >= 1");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
      detail::fail("harness", Errc::invalid_argument, "noise_sigma must be finite and >= 0");
    }
    if (!(reference_theta > 0.0 && reference_theta < 1.0)) {
      detail::fail("harness", Errc::invalid_argument, "reference_theta must lie in (0, 1)");
    }
  }
};

struct SynthImage {
  std::string id;
  Tensor3 image;   // channels x image_size, values in [0, 1]
  Tensor3 cam_l;   // n_classes x cam_size
  Tensor3 cam_f;   // same blob, independent noise
  std::size_t label = 0;
  BoundingBox gt_box;  // image coordinates
};

namespace detail {

using camforge::detail::fail;

inline Blob random_blob(Rng& rng, Dims2 cam, BlobKind kind) {
  Blob b;
  b.kind = kind;
  if (kind == BlobKind::rectangle) {
    auto span = [&](std::size_t n, std::size_t& lo, std::size_t& hi) {
      const std::size_t min_len = std::max<std::size_t>(1, n / 8);
      const std::size_t max_len = std::max(min_len, n / 2);
      const std::size_t len = min_len + rng.below(max_len - min_len + 1);
      lo = rng.below(n - len + 1);
      hi = lo + len;
    };
    span(cam.width, b.x0, b.x1);
    span(cam.height, b.y0, b.y1);
  } else {
    const double side = static_cast<double>(std::min(cam.height, cam.width));
    b.sigma = rng.uniform(std::max(0.5, side / 16.0), std::max(0.5, side / 6.0));
    b.cx = static_cast<double>(rng.below(cam.width)) + 0.5;
    b.cy = static_cast<double>(rng.below(cam.height)) + 0.5;
  }
  return b;
}

inline Tensor3 noisy_stack(Rng& rng, const SynthSpec& spec, std::size_t label, const ScoreMap& blob) {
  Tensor3 cam({spec.n_classes, spec.cam_size.height, spec.cam_size.width}, 0.0);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    for (std::size_t r = 0; r < spec.cam_size.height; ++r) {
      for (std::size_t w = 0; w < spec.cam_size.width; ++w) {
        double v = c == label ? blob(r, w) : 0.0;
        if (spec.noise_sigma > 0.0) v += rng.normal(0.0, spec.noise_sigma);
        cam(c, r, w) = v;
      }
    }
  }
  return cam;
}

inline std::string image_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%05zu", i);
  return buf;
}

}  // namespace detail

/// Image i is drawn from its own generator seeded with seed + i.
inline SynthImage generate_one(const SynthSpec& spec, std::size_t i) {
  Rng rng(spec.seed + i);
  SynthImage out;
  out.id = detail::image_id(i);
  out.label = spec.n_classes == 1 ? 0 : static_cast<std::size_t>(rng.below(spec.n_classes));
  const Blob blob = detail::random_blob(rng, spec.cam_size, spec.kind);
  const ScoreMap values = render_blob(spec.cam_size, blob);

  const double sx = static_cast<double>(spec.image_size.width) / static_cast<double>(spec.cam_size.width);
  const double sy = static_cast<double>(spec.image_size.height) / static_cast<double>(spec.cam_size.height);
  const BoundingBox cam_box = blob_cam_box(spec.cam_size, blob, spec.reference_theta);
  out.gt_box = {cam_box.x0 * sx, cam_box.y0 * sy, cam_box.x1 * sx, cam_box.y1 * sy};

  // Dim background with a class tint; the object is bright inside its box.
  out.image = Tensor3({spec.image_channels, spec.image_size.height, spec.image_size.width}, 0.0);
  for (std::size_t c = 0; c < spec.image_channels; ++c) {
    const double tint = 0.1 + 0.05 * static_cast<double>((out.label + c) % 3);
    for (std::size_t r = 0; r < spec.image_size.height; ++r) {
      const double y = static_cast<double>(r) + 0.5;
      for (std::size_t w = 0; w < spec.image_size.width; ++w) {
        const double x = static_cast<double>(w) + 0.5;
        const bool inside = x >= out.gt_box.x0 && x < out.gt_box.x1 && y >= out.gt_box.y0 && y < out.gt_box.y1;
        out.image(c, r, w) = inside ? 0.9 - 0.1 * static_cast<double>(c) : tint;
      }
    }
  }
  out.cam_l = detail::noisy_stack(rng, spec, out.label, values);
  out.cam_f = detail::noisy_stack(rng, spec, out.label, values);
  return out;
}

inline std::vector<SynthImage> generate(const SynthSpec& spec) {
  spec.validate();
  std::vector<SynthImage> out(spec.n_images);
  parallel_for(spec.n_images, [&](std::size_t i) { out[i] = generate_one(spec, i); });
  return out;
}

inline std::vector<evaluate::GroundTruth> ground_truth(const std::vector<SynthImage>& data) {
  std::vector<evaluate::GroundTruth> out;
  out.reserve(data.size());
  for (const auto& d : data) out.push_back({d.id, d.label, {d.gt_box}});
  return out;
}

/// Writes images/, cams/, ground_truth.csv and manifest.jsonl under `dir`.
/// Manifest paths are relative to `dir`.
inline void write_dataset(const std::filesystem::path& dir, const std::vector<SynthImage>& data) {
  std::filesystem::create_directories(dir / "images");
  std::filesystem::create_directories(dir / "cams");
  std::string manifest;
  for (const auto& d : data) {
    const std::string image = "images/" + d.id + ".camt";
    const std::string cam_l = "cams/" + d.id + "_l.camt";
    const std::string cam_f = "cams/" + d.id + "_f.camt";
    camt::write_tensor(dir / image, d.image);
    camt::write_tensor(dir / cam_l, d.cam_l);
    camt::write_tensor(dir / cam_f, d.cam_f);
    nlohmann::json line = {{"image_id", d.id},   {"image", image},  {"cam_l", cam_l},
                           {"cam_f", cam_f},     {"class_index", d.label}};
    manifest += line.dump() + "\n";
  }
  io::write_atomic(dir / "ground_truth.csv", evaluate::ground_truth_csv(ground_truth(data)));
  io::write_atomic(dir / "manifest.jsonl", manifest);
}

// ---------------------------------------------------------------------------
// Connected components oracle

/// Exhaustive stack-based flood fill. Components are listed in order of their
/// first pixel (row-major); each holds sorted row-major pixel indices.
inline std::vector<std::vector<std::size_t>> flood_fill_components(const BinaryMap& m, Connectivity conn) {
  const auto h = static_cast<long>(m.height());
  const auto w = static_cast<long>(m.width());
  std::vector<std::uint8_t> seen(m.size(), 0);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < m.size(); ++start) {
    if (!m[start] || seen[start]) continue;
    std::vector<std::size_t> comp;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      comp.push_back(p);
      const long r = static_cast<long>(p) / w;
      const long c = static_cast<long>(p) % w;
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (conn == Connectivity::four && dr != 0 && dc != 0) continue;
          const long nr = r + dr, nc = c + dc;
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          const auto q = static_cast<std::size_t>(nr * w + nc);
          if (m[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

/// Largest component by the oracle; ties go to the earliest-listed component.
inline BinaryMap oracle_largest_region(const BinaryMap& m, Connectivity conn) {
  const auto comps = flood_fill_components(m, conn);
  BinaryMap out(m.dims(), 0);
  const std::vector<std::size_t>* best = nullptr;
  for (const auto& c : comps) {
    if (!best || c.size() > best->size()) best = &c;
  }
  if (best) {
    for (auto p : *best) out[p] = 1;
  }
  return out;
}

/// Square spiral corridor, one pixel wide, separated from itself by one pixel.
inline BinaryMap spiral_map(Dims2 dims) {
  BinaryMap m(dims, 0);
  long top = 0, left = 0, bottom = static_cast<long>(dims.height) - 1, right = static_cast<long>(dims.width) - 1;
  while (top <= bottom && left <= right) {
    for (long c = left; c <= right; ++c) m(top, c) = 1;
    for (long r = top; r <= bottom; ++r) m(r, right) = 1;
    if (bottom - top >= 2) {
      for (long c = left; c <= right; ++c) m(bottom, c) = 1;
    }
    if (right - left >= 2 && bottom - top >= 4) {
      for (long r = top + 2; r <= bottom; ++r) m(r, left) = 1;
      m(top + 2, left + 1) = 1;
    }
    top += 2;
    left += 2;
    bottom -= 2;
    right -= 2;
  }
  return m;
}

/// Vertical teeth hanging from row 0. In the left half the spine row is
/// solid; in the right half it holds only isolated cells between teeth, so
/// those teeth join the spine only diagonally.
inline BinaryMap comb_map(Dims2 dims) {
  BinaryMap m(dims, 0);
  for (std::size_t c = 0; c < dims.width; ++c) {
    if (c < dims.width / 2 || c % 2 == 1) m(0, c) = 1;
  }
  for (std::size_t c = 0; c < dims.width; c += 2) {
    for (std::size_t r = 1; r < dims.height; ++r) m(r, c) = 1;
  }
  return m;
}

inline BinaryMap checkerboard_map(Dims2 dims) {
  BinaryMap m(dims, 0);
  for (std::size_t r = 0; r < dims.height; ++r)
    for (std::size_t c = 0; c < dims.width; ++c) m(r, c) = (r + c) % 2 == 0 ? 1 : 0;
  return m;
}

inline BinaryMap random_map(std::uint64_t seed, Dims2 dims, double density) {
  Rng rng(seed);
  BinaryMap m(dims, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) m[i] = rng.uniform() < density ? 1 : 0;
  return m;
}

// ---------------------------------------------------------------------------
// Gradient checking

using ScalarFn = std::function<double(std::span<const double>)>;

/// Max over coordinates of |g_a - g_fd| / max(1, |g_a|, |g_fd|) with central
/// differences of step h.
inline double grad_check(const ScalarFn& f, std::span<const double> x, std::span<const double> analytic,
                         double h = 1e-5) {
  if (x.size() != analytic.size()) detail::fail("harness", Errc::dim_mismatch, "gradient length != input length");
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double up = f(probe);
    probe[i] = orig - h;
    const double down = f(probe);
    probe[i] = orig;
    const double fd = (up - down) / (2.0 * h);
    if (!std::isfinite(up) || !std::isfinite(down) || !std::isfinite(analytic[i])) {
      detail::fail("harness", Errc::non_finite, "non-finite value during gradient check");
    }
    const double rel = std::abs(analytic[i] - fd) / std::max({1.0, std::abs(analytic[i]), std::abs(fd)});
    worst = std::max(worst, rel);
  }
  return worst;
}

/// Random InnerLoss instance with every masked |s_f - s_l| at least `margin`
/// away from the kink (resampled until it is). Values uniform in [0, 1).
struct InnerInstance {
  ScoreMap s_l;
  ScoreMap s_f;
  BinaryMap mask;
};

inline InnerInstance make_inner_instance(std::uint64_t seed, Dims2 dims, double margin = 0.0) {
  Rng rng(seed);
  while (true) {
    InnerInstance inst{ScoreMap(dims, 0.0), ScoreMap(dims, 0.0), BinaryMap(dims, 0)};
    for (std::size_t i = 0; i < dims.size(); ++i) inst.s_l[i] = rng.uniform();
    for (std::size_t i = 0; i < dims.size(); ++i) inst.s_f[i] = rng.uniform();
    inst.mask = confseg::confidence_mask(inst.s_l).binary;
    bool ok = true;
    for (std::size_t i = 0; i < dims.size() && ok; ++i) {
      ok = !inst.mask[i] || std::abs(inst.s_f[i] - inst.s_l[i]) >= margin;
    }
    if (ok) return inst;
  }
}

/// Random batch of `n` samples over `classes` labels (label i % classes) with
/// Gaussian vectors; resampled until every distance entering the loss is at
/// least `margin`.
inline coaug::EmbeddingBatch make_coaug_instance(std::uint64_t seed, std::size_t n, std::size_t classes,
                                                 std::size_t dim, coaug::CoaugParams params, double margin = 0.0) {
  Rng rng(seed);
  while (true) {
    coaug::EmbeddingBatch batch;
    batch.params = params;
    for (std::size_t m = 0; m < n; ++m) {
      coaug::SampleEmbedding s{coaug::Vector(dim), coaug::Vector(dim), coaug::Vector(dim), m % classes};
      for (auto& v : s.fg) v = rng.normal();
      for (auto& v : s.bg) v = rng.normal();
      for (auto& v : s.mask_bg) v = rng.normal();
      batch.samples.push_back(std::move(s));
    }
    bool ok = true;
    for (std::size_t m = 0; m < n && ok; ++m) {
      const auto& s = batch.samples[m];
      ok = coaug::pair_distance(s.fg, s.bg) >= margin && coaug::pair_distance(s.bg, s.mask_bg) >= margin;
      for (std::size_t k = m + 1; k < n && ok; ++k) {
        ok = coaug::pair_distance(s.fg, batch.samples[k].fg) >= margin;
      }
    }
    if (ok) return batch;
  }
}

/// Flattens a batch as [F_0, B_0, MaskB_0, F_1, ...].
inline std::vector<double> flatten(const coaug::EmbeddingBatch& batch) {
  std::vector<double> out;
  for (const auto& s : batch.samples) {
    out.insert(out.end(), s.fg.begin(), s.fg.end());
    out.insert(out.end(), s.bg.begin(), s.bg.end());
    out.insert(out.end(), s.mask_bg.begin(), s.mask_bg.end());
  }
  return out;
}

inline std::vector<double> flatten(const std::vector<coaug::SampleGrads>& grads) {
  std::vector<double> out;
  for (const auto& g : grads) {
    out.insert(out.end(), g.fg.begin(), g.fg.end());
    out.insert(out.end(), g.bg.begin(), g.bg.end());
    out.insert(out.end(), g.mask_bg.begin(), g.mask_bg.end());
  }
  return out;
}

inline void unflatten(std::span<const double> flat, coaug::EmbeddingBatch& batch) {
  std::size_t at = 0;
  for (auto& s : batch.samples) {
    for (auto* v : {&s.fg, &s.bg, &s.mask_bg}) {
      std::copy(flat.begin() + static_cast<std::ptrdiff_t>(at),
                flat.begin() + static_cast<std::ptrdiff_t>(at + v->size()), v->begin());
      at += v->size();
    }
  }
}

// ---------------------------------------------------------------------------
// Gradient descent demos

inline constexpr double kDivergenceLimit = 1e12;

struct DescentOptions {
  std::size_t steps = 2000;
  double lr = 0.1;
  /// Step size is multiplied by this after every step. Subgradient descent
  /// on an L1 objective with a constant step oscillates at amplitude ~lr, so
  /// the inner demo uses a geometric decay; any decay in [0.5, 1) converges
  /// while the total travel lr / (1 - decay) covers the initial gap.
  double lr_decay = 0.99;
};

/// Loss after 0, 1, ..., steps updates of S_F (S_L and the mask held fixed).
inline std::vector<double> descend_inner(InnerInstance inst, DescentOptions opts) {
  std::vector<double> trajectory;
  trajectory.reserve(opts.steps + 1);
  double lr = opts.lr;
  for (std::size_t step = 0;; ++step) {
    const auto res = confseg::inner_loss(inst.s_f, inst.s_l, inst.mask, {.detach_target = true});
    if (!(res.loss <= kDivergenceLimit)) detail::fail("harness", Errc::divergence, "inner descent diverged");
    trajectory.push_back(res.loss);
    if (step == opts.steps) break;
    for (std::size_t i = 0; i < inst.s_f.size(); ++i) inst.s_f[i] -= lr * res.grad_f[i];
    lr *= opts.lr_decay;
  }
  return trajectory;
}

struct CoaugTrajectory {
  std::vector<double> loss;
  /// |F_0 - F_1| before each update.
  std::vector<double> pair_distance;
};

/// Plain gradient descent on every vector of the batch.
inline CoaugTrajectory descend_coaug(coaug::EmbeddingBatch batch, std::size_t steps, double lr) {
  CoaugTrajectory out;
  for (std::size_t step = 0;; ++step) {
    const auto res = coaug::coaug_loss(batch);
    if (!(res.loss <= kDivergenceLimit)) detail::fail("harness", Errc::divergence, "coaug descent diverged");
    out.loss.push_back(res.loss);
    if (batch.samples.size() >= 2) {
      out.pair_distance.push_back(coaug::pair_distance(batch.samples[0].fg, batch.samples[1].fg));
    }
    if (step == steps) break;
    auto x = flatten(batch);
    const auto g = flatten(res.grads);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= lr * g[i];
    unflatten(x, batch);
  }
  return out;
}

/// Two same-class samples whose foreground/background gap (|F - B| ~ 4)
/// dominates the foreground pair distance, gamma = 0.
inline coaug::EmbeddingBatch make_pull_instance(std::uint64_t seed, std::size_t dim = 8) {
  Rng rng(seed);
  coaug::EmbeddingBatch batch;
  batch.params.gamma = 0.0;
  for (std::size_t m = 0; m < 2; ++m) {
    coaug::SampleEmbedding s{coaug::Vector(dim), coaug::Vector(dim), coaug::Vector(dim), 0};
    coaug::Vector dir(dim);
    double norm = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < dim; ++k) {
      s.fg[k] = rng.normal(0.0, 0.3);
      s.bg[k] = s.fg[k] + 4.0 * dir[k] / norm;
      s.mask_bg[k] = s.bg[k] + rng.normal(0.0, 0.1);
    }
    batch.samples.push_back(std::move(s));
  }
  return batch;
}

enum class DemoLoss { inner, coaug };

/// Runs the demo for `loss` on a seeded instance and returns the loss sequence.
inline std::vector<double> descend_demo(DemoLoss loss, DescentOptions opts, std::uint64_t seed = 0) {
  if (loss == DemoLoss::inner) return descend_inner(make_inner_instance(seed, {16, 16}), opts);
  return descend_coaug(make_pull_instance(seed), opts.steps, opts.lr).loss;
}

}  // namespace camforge::harness

#endif  // CAMFORGE_HARNESS_HPP_
