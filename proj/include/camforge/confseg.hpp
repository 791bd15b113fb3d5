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

#ifndef CAMFORGE_CONFSEG_HPP_
#define CAMFORGE_CONFSEG_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "camforge/error.hpp"
#include "camforge/tensor.hpp"

namespace camforge::confseg {

/// Per-pixel confidence |S - mu1| and its binarization at the mask mean mu2.
struct ConfidenceMask {
  double mu1 = 0.0;
  ScoreMap mask;
  double mu2 = 0.0;
  BinaryMap binary;

  /// Fraction of pixels flagged confident.
  double confident_fraction() const {
    std::size_t on = 0;
    for (auto b : binary.values()) on += b;
    return static_cast<double>(on) / static_cast<double>(binary.size());
  }
};

/// Equivalent fixed foreground/background thresholds.
struct SpgThresholds {
  double xi1 = 0.0;
  double xi2 = 0.0;
};

inline ConfidenceMask confidence_mask(const ScoreMap& s) {
  const double n = static_cast<double>(s.size());
  ConfidenceMask cm;
  double sum = 0.0;
  for (double v : s.values()) sum += v;
  cm.mu1 = sum / n;

  cm.mask = ScoreMap(s.dims(), 0.0);
  double mask_sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cm.mask[i] = std::abs(s[i] - cm.mu1);
    mask_sum += cm.mask[i];
  }
  cm.mu2 = mask_sum / n;

  cm.binary = BinaryMap(s.dims(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) cm.binary[i] = cm.mask[i] > cm.mu2 ? 1 : 0;
  return cm;
}

inline SpgThresholds spg_thresholds(const ConfidenceMask& cm) {
  return {cm.mu1 + cm.mu2, cm.mu1 - cm.mu2};
}

struct InnerLoss {
  double loss = 0.0;
  ScoreMap grad_f;
  ScoreMap grad_l;
};

struct InnerLossOptions {
  /// Treat S_L as a fixed target: grad_l is returned as zeros.
  bool detach_target = false;
};

/// Masked L1 distance between the two CAM slices. The binary mask is a
/// constant; sign(0) is taken as 0.
inline InnerLoss inner_loss(const ScoreMap& s_f, const ScoreMap& s_l, const BinaryMap& binary,
                            InnerLossOptions opts = {}) {
  if (s_f.dims() != s_l.dims() || s_f.dims() != binary.dims()) {
    detail::fail("confseg", Errc::dim_mismatch, "inner_loss inputs must share dims");
  }
  InnerLoss out{0.0, ScoreMap(s_f.dims(), 0.0), ScoreMap(s_f.dims(), 0.0)};
  for (std::size_t i = 0; i < s_f.size(); ++i) {
    if (!binary[i]) continue;
    const double d = s_f[i] - s_l[i];
    out.loss += std::abs(d);
    const double g = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    out.grad_f[i] = g;
    if (!opts.detach_target) out.grad_l[i] = -g;
  }
  return out;
}

/// alpha(e) = min(1, e / (ramp_fraction * total_epochs)).
struct AlphaSchedule {
  int total_epochs = 1;
  double ramp_fraction = 1.0;

  AlphaSchedule() = default;
  AlphaSchedule(int total, double ramp = 1.0) : total_epochs(total), ramp_fraction(ramp) {
    if (total_epochs < 1) detail::fail("confseg", Errc::invalid_argument, "total_epochs must be >= 1");
    if (!(ramp_fraction > 0.0 && ramp_fraction <= 1.0)) {
      detail::fail("confseg", Errc::invalid_argument, "ramp_fraction must lie in (0, 1]");
    }
  }

  double alpha(int epoch) const {
    if (epoch < 0) detail::fail("confseg", Errc::invalid_argument, "epoch must be >= 0");
    return std::min(1.0, static_cast<double>(epoch) / (ramp_fraction * static_cast<double>(total_epochs)));
  }
};

inline double combined_loss(double l_cls, double l_inner, int epoch, const AlphaSchedule& sched) {
  return l_cls + sched.alpha(epoch) * l_inner;
}

}  // namespace camforge::confseg

#endif  // CAMFORGE_CONFSEG_HPP_
