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

#ifndef CAMFORGE_PIPELINE_HPP_
#define CAMFORGE_PIPELINE_HPP_

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "camforge/cam_core.hpp"
#include "camforge/error.hpp"
#include "camforge/evaluate.hpp"
#include "camforge/localize.hpp"
#include "camforge/tensor.hpp"

namespace camforge::pipeline {

struct ImagePrediction {
  evaluate::Prediction prediction;
  /// Classes whose box came from the full-image fallback.
  std::vector<std::size_t> fallback_classes;
};

/// Ranks classes by the summed GAP logits of both CAM stacks (ties by lower
/// index) and localizes each of the top-k classes from its own slices.
inline ImagePrediction predict(std::string image_id, const Tensor3& cam_l, const Tensor3& cam_f, Dims2 image_dims,
                               std::size_t top_k = 5, localize::LocalizeOptions opts = {}) {
  if (cam_l.dims() != cam_f.dims()) detail::fail("localize", Errc::dim_mismatch, "CAM stacks differ in dims");
  const auto gl = global_average_pool(cam_l).values;
  const auto gf = global_average_pool(cam_f).values;
  std::vector<double> score(gl.size());
  for (std::size_t c = 0; c < gl.size(); ++c) score[c] = gl[c] + gf[c];
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(std::min(top_k, order.size()));

  ImagePrediction out;
  out.prediction.image_id = std::move(image_id);
  out.prediction.ranked_classes = order;
  for (std::size_t c : order) {
    const auto loc = localize::localize(slice_class(cam_l, c), slice_class(cam_f, c), image_dims, opts);
    out.prediction.box_per_class[c] = loc.box;
    if (loc.fallback_used) out.fallback_classes.push_back(c);
  }
  return out;
}

}  // namespace camforge::pipeline

#endif  // CAMFORGE_PIPELINE_HPP_
