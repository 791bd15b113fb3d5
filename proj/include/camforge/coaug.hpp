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

#ifndef CAMFORGE_COAUG_HPP_
#define CAMFORGE_COAUG_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "camforge/cam_core.hpp"
#include "camforge/confseg.hpp"
#include "camforge/error.hpp"
#include "camforge/random.hpp"
#include "camforge/tensor.hpp"

namespace camforge::coaug {

using Vector = std::vector<double>;

/// Anything that maps an input tensor to a fixed-length vector and can pull
/// an output cotangent back to the input.
template <typename E>
concept Embedder = requires(const E& e, const Tensor3& x, std::span<const double> cotangent) {
  { e.embed(x) } -> std::same_as<Vector>;
  { e.input_gradient(x, cotangent) } -> std::same_as<Tensor3>;
  { e.output_dim() } -> std::convertible_to<std::size_t>;
};

/// Adaptive 8x8 average pool per channel followed by a seeded Gaussian
/// projection. Cell i along an axis of length n covers
/// [floor(i*n/8), ceil((i+1)*n/8)), so cells always cover the whole input
/// and may overlap when n is not a multiple of 8.
class LinearEmbedder {
 public:
  static constexpr std::size_t kGrid = 8;

  LinearEmbedder(std::size_t channels, std::uint64_t seed, std::size_t dim = 64)
      : channels_(channels), dim_(dim), weights_(dim * channels * kGrid * kGrid) {
    if (channels == 0 || dim == 0) {
      detail::fail("coaug", Errc::invalid_argument, "embedder needs channels >= 1 and dim >= 1");
    }
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in()));
    for (double& w : weights_) w = rng.normal() * scale;
  }

  std::size_t output_dim() const noexcept { return dim_; }
  std::size_t input_channels() const noexcept { return channels_; }
  std::size_t fan_in() const noexcept { return channels_ * kGrid * kGrid; }

  Vector embed(const Tensor3& x) const {
    const Vector pooled = pool(x);
    Vector out(dim_, 0.0);
    for (std::size_t o = 0; o < dim_; ++o) {
      const double* row = &weights_[o * fan_in()];
      double acc = 0.0;
      for (std::size_t k = 0; k < pooled.size(); ++k) acc += row[k] * pooled[k];
      out[o] = acc;
    }
    return out;
  }

  /// d<cotangent, embed(x)>/dx. Independent of x's values (the map is linear)
  /// but x supplies the spatial shape.
  Tensor3 input_gradient(const Tensor3& x, std::span<const double> cotangent) const {
    check_input(x);
    if (cotangent.size() != dim_) detail::fail("coaug", Errc::dim_mismatch, "cotangent length != embedder dim");
    Vector dpooled(fan_in(), 0.0);
    for (std::size_t o = 0; o < dim_; ++o) {
      const double* row = &weights_[o * fan_in()];
      for (std::size_t k = 0; k < dpooled.size(); ++k) dpooled[k] += row[k] * cotangent[o];
    }
    Tensor3 dx(x.dims(), 0.0);
    for_each_cell(x.dims(), [&](std::size_t c, std::size_t k, std::size_t r0, std::size_t r1, std::size_t c0,
                                std::size_t c1) {
      const double g = dpooled[k] / static_cast<double>((r1 - r0) * (c1 - c0));
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t w = c0; w < c1; ++w) dx(c, r, w) += g;
    });
    return dx;
  }

  /// Flattened (channel, cell-row, cell-col) pooled features.
  Vector pool(const Tensor3& x) const {
    check_input(x);
    Vector pooled(fan_in(), 0.0);
    for_each_cell(x.dims(), [&](std::size_t c, std::size_t k, std::size_t r0, std::size_t r1, std::size_t c0,
                                std::size_t c1) {
      double acc = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t w = c0; w < c1; ++w) acc += x(c, r, w);
      pooled[k] = acc / static_cast<double>((r1 - r0) * (c1 - c0));
    });
    return pooled;
  }

 private:
  void check_input(const Tensor3& x) const {
    if (x.channels() != channels_) {
      detail::fail("coaug", Errc::dim_mismatch, "embedder built for a different channel count");
    }
  }

  template <typename F>
  static void for_each_cell(Dims3 dims, F&& f) {
    auto lo = [](std::size_t i, std::size_t n) { return i * n / kGrid; };
    auto hi = [](std::size_t i, std::size_t n) { return ((i + 1) * n + kGrid - 1) / kGrid; };
    for (std::size_t c = 0; c < dims.channels; ++c)
      for (std::size_t i = 0; i < kGrid; ++i)
        for (std::size_t j = 0; j < kGrid; ++j)
          f(c, (c * kGrid + i) * kGrid + j, lo(i, dims.height), hi(i, dims.height), lo(j, dims.width),
            hi(j, dims.width));
  }

  std::size_t channels_;
  std::size_t dim_;
  std::vector<double> weights_;  // dim x fan_in, row-major
};

static_assert(Embedder<LinearEmbedder>);

inline Vector embed_default(const Tensor3& x, std::uint64_t seed, std::size_t dim = 64) {
  return LinearEmbedder(x.channels(), seed, dim).embed(x);
}

/// The three embedder inputs of one sample.
struct WeightedInputs {
  Tensor3 fg;
  Tensor3 bg;
  Tensor3 mask_bg;
};

/// fg = S*I, bg = (1-S)*I, mask_bg = (1-S)*M*I with the 2-D weights
/// broadcast across image channels. S and M must already match image dims.
inline WeightedInputs weight_inputs(const Tensor3& image, const ScoreMap& weight, const BinaryMap& mask) {
  if (weight.dims() != image.dims().plane() || mask.dims() != image.dims().plane()) {
    detail::fail("coaug", Errc::dim_mismatch, "weights must match image dims");
  }
  WeightedInputs out{Tensor3(image.dims()), Tensor3(image.dims()), Tensor3(image.dims())};
  for (std::size_t c = 0; c < image.channels(); ++c) {
    for (std::size_t r = 0; r < image.height(); ++r) {
      for (std::size_t w = 0; w < image.width(); ++w) {
        const double v = image(c, r, w);
        const double s = weight(r, w);
        out.fg(c, r, w) = s * v;
        out.bg(c, r, w) = (1.0 - s) * v;
        out.mask_bg(c, r, w) = (1.0 - s) * static_cast<double>(mask(r, w)) * v;
      }
    }
  }
  return out;
}

/// Builds the embedder inputs from the sample's own class slice: the slice is
/// min-max normalized and bilinearly resized; its confidence mask is
/// nearest-resized.
inline WeightedInputs weight_sample(const LabelledSample& sample) {
  sample.validate();
  const ScoreMap slice = slice_class(*sample.cam, sample.class_index);
  const auto cm = confseg::confidence_mask(slice);
  const Dims2 target = sample.image.dims().plane();
  return weight_inputs(sample.image, resize_bilinear(minmax_normalize(slice), target),
                       resize_nearest(cm.binary, target));
}

inline double pair_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) detail::fail("coaug", Errc::dim_mismatch, "vectors differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

struct SampleEmbedding {
  Vector fg;
  Vector bg;
  Vector mask_bg;
  std::size_t label = 0;
};

struct CoaugParams {
  double gamma = 1.0;
  double delta = 1.0;
  double epsilon = 1e-8;
  /// Divide the pair sum by the number of pairs.
  bool mean_over_pairs = true;
};

struct EmbeddingBatch {
  std::vector<SampleEmbedding> samples;
  CoaugParams params;
};

struct SampleGrads {
  Vector fg;
  Vector bg;
  Vector mask_bg;
};

struct CoaugLoss {
  double loss = 0.0;
  std::vector<SampleGrads> grads;  // same order as batch.samples
  std::size_t pairs = 0;
};

struct SampleDistances {
  double d_cam = 0.0;   // |F - B|
  double d_back = 0.0;  // |B - MaskB|
};

namespace detail {

using camforge::detail::fail;

inline void validate(const EmbeddingBatch& batch) {
  const auto& p = batch.params;
  if (!(p.gamma >= 0.0) || !(p.delta >= 0.0) || !(p.epsilon > 0.0)) {
    fail("coaug", Errc::invalid_argument, "need gamma >= 0, delta >= 0, epsilon > 0");
  }
  if (batch.samples.empty()) fail("coaug", Errc::invalid_argument, "empty batch");
  const std::size_t d = batch.samples.front().fg.size();
  if (d == 0) fail("coaug", Errc::dim_mismatch, "zero-length embeddings");
  for (const auto& s : batch.samples) {
    if (s.fg.size() != d || s.bg.size() != d || s.mask_bg.size() != d) {
      fail("coaug", Errc::dim_mismatch, "embedding vectors differ in length");
    }
  }
}

/// (u - v) / |u - v|, or zeros at coincident vectors.
inline Vector unit_difference(const Vector& u, const Vector& v, double norm) {
  Vector out(u.size(), 0.0);
  if (norm == 0.0) return out;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (u[i] - v[i]) / norm;
  return out;
}

inline void axpy(double a, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

/// Sample order that depends only on sample contents, so the pair sum is
/// independent of how the batch was ordered.
inline std::vector<std::size_t> canonical_order(const std::vector<SampleEmbedding>& samples) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = samples[a];
    const auto& y = samples[b];
    if (x.label != y.label) return x.label < y.label;
    if (x.fg != y.fg) return x.fg < y.fg;
    if (x.bg != y.bg) return x.bg < y.bg;
    return x.mask_bg < y.mask_bg;
  });
  return order;
}

}  // namespace detail

inline std::vector<SampleDistances> sample_distances(const EmbeddingBatch& batch) {
  detail::validate(batch);
  std::vector<SampleDistances> out;
  out.reserve(batch.samples.size());
  for (const auto& s : batch.samples) {
    out.push_back({pair_distance(s.fg, s.bg), pair_distance(s.bg, s.mask_bg)});
  }
  return out;
}

/// Batch metric loss over unordered pairs {m, n}:
///
///   [gamma (Db_m + Db_n) + same * D_mn] / [delta * diff * D_mn + (Dc_m + Dc_n) / 2 + eps]
///
/// with Dc = |F - B|, Db = |B - MaskB|, D_mn = |F_m - F_n|, same = [y_m == y_n]
/// and diff = 1 - same. Norm gradients at coincident vectors are zero.
inline CoaugLoss coaug_loss(const EmbeddingBatch& batch) {
  detail::validate(batch);
  const auto& p = batch.params;
  const auto& samples = batch.samples;
  const std::size_t n = samples.size();
  const std::size_t d = samples.front().fg.size();

  CoaugLoss out;
  out.grads.assign(n, SampleGrads{Vector(d, 0.0), Vector(d, 0.0), Vector(d, 0.0)});
  if (n < 2) return out;
  out.pairs = n * (n - 1) / 2;
  const double scale = p.mean_over_pairs ? 1.0 / static_cast<double>(out.pairs) : 1.0;

  std::vector<double> d_cam(n), d_back(n);
  std::vector<Vector> u_cam(n), u_back(n);
  for (std::size_t m = 0; m < n; ++m) {
    d_cam[m] = pair_distance(samples[m].fg, samples[m].bg);
    d_back[m] = pair_distance(samples[m].bg, samples[m].mask_bg);
    u_cam[m] = detail::unit_difference(samples[m].fg, samples[m].bg, d_cam[m]);
    u_back[m] = detail::unit_difference(samples[m].bg, samples[m].mask_bg, d_back[m]);
  }

  const auto order = detail::canonical_order(samples);
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t i = order[a];
      const std::size_t j = order[b];
      const double same = samples[i].label == samples[j].label ? 1.0 : 0.0;
      const double d_pair = pair_distance(samples[i].fg, samples[j].fg);
      const Vector u_pair = detail::unit_difference(samples[i].fg, samples[j].fg, d_pair);

      const double num = p.gamma * (d_back[i] + d_back[j]) + same * d_pair;
      const double den = p.delta * (1.0 - same) * d_pair + 0.5 * (d_cam[i] + d_cam[j]) + p.epsilon;
      total += num / den;

      const double d_num = scale / den;               // d term / d num
      const double d_den = -scale * num / (den * den);  // d term / d den
      const double along_pair = d_num * same + d_den * p.delta * (1.0 - same);

      detail::axpy(along_pair, u_pair, out.grads[i].fg);
      detail::axpy(-along_pair, u_pair, out.grads[j].fg);
      for (std::size_t k : {i, j}) {
        detail::axpy(0.5 * d_den, u_cam[k], out.grads[k].fg);
        detail::axpy(-0.5 * d_den, u_cam[k], out.grads[k].bg);
        detail::axpy(d_num * p.gamma, u_back[k], out.grads[k].bg);
        detail::axpy(-d_num * p.gamma, u_back[k], out.grads[k].mask_bg);
      }
    }
  }
  out.loss = total * scale;
  return out;
}

/// Embeds one weighted sample with any Embedder.
template <Embedder E>
SampleEmbedding embed_sample(const E& embedder, const WeightedInputs& in, std::size_t label) {
  return {embedder.embed(in.fg), embedder.embed(in.bg), embedder.embed(in.mask_bg), label};
}

/// Seeded batch sampler drawing `batch_size` indices from at most
/// `max_categories` classes. Classes with at least two samples are preferred
/// so that same-class pairs exist; each chosen class receives at least two
/// slots when batch_size allows. A class smaller than its quota is cycled
/// through again (indices repeat only then).
inline std::vector<std::size_t> make_batch(std::span<const std::size_t> labels, std::size_t max_categories,
                                           std::size_t batch_size, std::uint64_t seed) {
  if (batch_size < 2) detail::fail("coaug", Errc::invalid_argument, "batch_size must be >= 2");
  if (max_categories < 1) detail::fail("coaug", Errc::invalid_argument, "max_categories must be >= 1");
  if (labels.empty()) detail::fail("coaug", Errc::invalid_argument, "empty dataset");

  std::map<std::size_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> classes;
  for (const auto& [label, members] : by_class) classes.push_back(label);
  rng.shuffle(classes);
  std::stable_partition(classes.begin(), classes.end(),
                        [&](std::size_t c) { return by_class[c].size() >= 2; });

  const std::size_t k = std::min({max_categories, classes.size(), std::max<std::size_t>(1, batch_size / 2)});
  classes.resize(k);

  std::vector<std::size_t> batch;
  batch.reserve(batch_size);
  for (std::size_t ci = 0; ci < k; ++ci) {
    const std::size_t quota = batch_size / k + (ci < batch_size % k ? 1 : 0);
    std::vector<std::size_t> pool = by_class[classes[ci]];
    rng.shuffle(pool);
    for (std::size_t q = 0; q < quota; ++q) batch.push_back(pool[q % pool.size()]);
  }
  rng.shuffle(batch);
  return batch;
}

/// Defaults used for training batches: 48 samples from at most 12 classes.
inline constexpr std::size_t kDefaultBatchSize = 48;
inline constexpr std::size_t kDefaultMaxCategories = 12;

}  // namespace camforge::coaug

#endif  // CAMFORGE_COAUG_HPP_
