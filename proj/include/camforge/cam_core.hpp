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

#ifndef CAMFORGE_CAM_CORE_HPP_
#define CAMFORGE_CAM_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "camforge/error.hpp"
#include "camforge/tensor.hpp"

namespace camforge {

/// Per-channel spatial mean of a CAM stack (the GAP logits).
inline Logits global_average_pool(const Tensor3& cam) {
  Logits out;
  out.values.reserve(cam.channels());
  const double denom = static_cast<double>(cam.height() * cam.width());
  for (std::size_t c = 0; c < cam.channels(); ++c) {
    double sum = 0.0;
    for (double v : cam.channel_view(c)) sum += v;
    out.values.push_back(sum / denom);
  }
  return out;
}

/// Copy of channel `c`.
inline ScoreMap slice_class(const Tensor3& cam, std::size_t c) {
  if (c >= cam.channels()) {
    detail::fail("cam_core", Errc::out_of_range,
                 "class index " + std::to_string(c) + " out of range for " +
                     std::to_string(cam.channels()) + " channels");
  }
  auto view = cam.channel_view(c);
  return ScoreMap(cam.dims().plane(), std::vector<double>(view.begin(), view.end()));
}

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// -log softmax(logits)[target] with its gradient softmax - onehot.
/// Sums are taken relative to the max logit; the max term itself is kept
/// out of the sum so that log1p and the target gradient stay accurate when
/// one logit dominates.
inline LossAndGrad softmax_cross_entropy(std::span<const double> logits, std::size_t target) {
  if (logits.empty()) detail::fail("cam_core", Errc::invalid_argument, "empty logits");
  if (target >= logits.size()) {
    detail::fail("cam_core", Errc::out_of_range, "target class out of range");
  }
  for (double z : logits) {
    if (!std::isfinite(z)) detail::fail("cam_core", Errc::non_finite, "non-finite logit");
  }
  const std::size_t top = static_cast<std::size_t>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
  const double m = logits[top];

  std::vector<double> e(logits.size());
  double rest = 0.0;  // sum of exp(z - m) over j != top
  for (std::size_t j = 0; j < logits.size(); ++j) {
    e[j] = std::exp(logits[j] - m);
    if (j != top) rest += e[j];
  }
  const double total = 1.0 + rest;

  LossAndGrad out;
  out.loss = std::log1p(rest) + (m - logits[target]);
  out.grad.resize(logits.size());
  double others = 0.0;  // sum of exp(z - m) over j != target
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (j != target) {
      out.grad[j] = e[j] / total;
      others += e[j];
    }
  }
  out.grad[target] = -others / total;
  return out;
}

inline LossAndGrad softmax_cross_entropy(const Logits& logits, std::size_t target) {
  return softmax_cross_entropy(std::span<const double>(logits.values), target);
}

/// (s - min) / (max - min); a constant map becomes all zeros.
inline ScoreMap minmax_normalize(const ScoreMap& s) {
  auto v = s.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo;
  const double range = *hi - min;
  ScoreMap out(s.dims(), 0.0);
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - min) / range;
  return out;
}

/// Bilinear resampling with half-pixel centers and edge clamping.
inline ScoreMap resize_bilinear(const ScoreMap& s, Dims2 target) {
  if (target.height == 0 || target.width == 0) {
    detail::fail("cam_core", Errc::invalid_argument, "resize to zero-size target");
  }
  ScoreMap out(target, 0.0);
  const double sy = static_cast<double>(s.height()) / static_cast<double>(target.height);
  const double sx = static_cast<double>(s.width()) / static_cast<double>(target.width);
  const auto max_r = static_cast<double>(s.height() - 1);
  const auto max_c = static_cast<double>(s.width() - 1);
  for (std::size_t r = 0; r < target.height; ++r) {
    const double fy = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, max_r);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, s.height() - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t c = 0; c < target.width; ++c) {
      const double fx = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, max_c);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, s.width() - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = s(y0, x0) * (1.0 - wx) + s(y0, x1) * wx;
      const double bottom = s(y1, x0) * (1.0 - wx) + s(y1, x1) * wx;
      out(r, c) = top * (1.0 - wy) + bottom * wy;
    }
  }
  return out;
}

/// Nearest-neighbour resampling (source index floor((dst + 0.5) * src / dst)).
template <typename T>
Grid<T> resize_nearest(const Grid<T>& s, Dims2 target) {
  if (target.height == 0 || target.width == 0) {
    detail::fail("cam_core", Errc::invalid_argument, "resize to zero-size target");
  }
  Grid<T> out(target, T{});
  for (std::size_t r = 0; r < target.height; ++r) {
    const std::size_t sr = std::min(s.height() - 1, (2 * r + 1) * s.height() / (2 * target.height));
    for (std::size_t c = 0; c < target.width; ++c) {
      const std::size_t sc = std::min(s.width() - 1, (2 * c + 1) * s.width() / (2 * target.width));
      out(r, c) = s(sr, sc);
    }
  }
  return out;
}

}  // namespace camforge

#endif  // CAMFORGE_CAM_CORE_HPP_
