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

#ifndef CAMFORGE_LOCALIZE_HPP_
#define CAMFORGE_LOCALIZE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "camforge/error.hpp"
#include "camforge/tensor.hpp"

namespace camforge {

/// Half-open box [x0, x1) x [y0, y1) in continuous image coordinates.
struct BoundingBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }
  double area() const noexcept { return width() * height(); }
  bool valid() const noexcept { return x1 > x0 && y1 > y0; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

namespace localize {

enum class Connectivity { four = 4, eight = 8 };

inline constexpr double kDefaultTheta = 0.3;

/// bit = s > theta * max(s). A map whose max is <= 0 yields all zeros.
inline BinaryMap threshold_map(const ScoreMap& s, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    detail::fail("localize", Errc::out_of_range, "theta must lie in (0, 1)");
  }
  BinaryMap out(s.dims(), 0);
  const double max = *std::max_element(s.values().begin(), s.values().end());
  if (max <= 0.0) return out;
  const double cut = theta * max;
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] > cut ? 1 : 0;
  return out;
}

inline BinaryMap union_maps(const BinaryMap& a, const BinaryMap& b) {
  if (a.dims() != b.dims()) detail::fail("localize", Errc::dim_mismatch, "union of maps with different dims");
  BinaryMap out(a.dims(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] | b[i]);
  return out;
}

namespace detail {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as root so roots are scan-order first pixels.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Keeps one maximum-cardinality connected component of 1-pixels. Ties go to
/// the component whose first pixel comes earliest in row-major scan order.
/// Two-pass union-find labeling.
inline BinaryMap largest_region(const BinaryMap& m, Connectivity conn = Connectivity::eight) {
  const std::size_t h = m.height();
  const std::size_t w = m.width();
  detail::DisjointSet sets(m.size());
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!m(r, c)) continue;
      const std::size_t here = r * w + c;
      if (c > 0 && m(r, c - 1)) sets.unite(here, here - 1);
      if (r > 0) {
        if (m(r - 1, c)) sets.unite(here, here - w);
        if (conn == Connectivity::eight) {
          if (c > 0 && m(r - 1, c - 1)) sets.unite(here, here - w - 1);
          if (c + 1 < w && m(r - 1, c + 1)) sets.unite(here, here - w + 1);
        }
      }
    }
  }

  std::vector<std::size_t> count(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) ++count[sets.find(i)];
  }
  // Roots are first pixels; scanning in index order makes ">" pick the
  // earliest among equal sizes.
  std::size_t best = m.size();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (count[i] > 0 && (best == m.size() || count[i] > count[best])) best = i;
  }

  BinaryMap out(m.dims(), 0);
  if (best == m.size()) return out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] && sets.find(i) == best) out[i] = 1;
  }
  return out;
}

/// Tight box around the 1-pixels in CAM cells, scaled into image coordinates.
inline BoundingBox region_bbox(const BinaryMap& m, Dims2 image_dims) {
  std::size_t r0 = m.height(), c0 = m.width(), r1 = 0, c1 = 0;
  bool any = false;
  for (std::size_t r = 0; r < m.height(); ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) {
      if (!m(r, c)) continue;
      any = true;
      r0 = std::min(r0, r);
      c0 = std::min(c0, c);
      r1 = std::max(r1, r + 1);
      c1 = std::max(c1, c + 1);
    }
  }
  if (!any) camforge::detail::fail("localize", Errc::no_region, "no region: map has no foreground pixels");
  const double sx = static_cast<double>(image_dims.width) / static_cast<double>(m.width());
  const double sy = static_cast<double>(image_dims.height) / static_cast<double>(m.height());
  return {static_cast<double>(c0) * sx, static_cast<double>(r0) * sy, static_cast<double>(c1) * sx,
          static_cast<double>(r1) * sy};
}

struct Localization {
  BoundingBox box;
  /// True when neither map had a foreground pixel and the full image was returned.
  bool fallback_used = false;
};

struct LocalizeOptions {
  double theta = kDefaultTheta;
  Connectivity connectivity = Connectivity::eight;
};

/// Threshold both slices, union them, keep the largest region and box it.
inline Localization localize(const ScoreMap& s_l, const ScoreMap& s_f, Dims2 image_dims,
                             LocalizeOptions opts = {}) {
  if (s_l.dims() != s_f.dims()) camforge::detail::fail("localize", Errc::dim_mismatch, "CAM slices differ in dims");
  if (image_dims.height == 0 || image_dims.width == 0) {
    camforge::detail::fail("localize", Errc::invalid_argument, "image dims must be >= 1");
  }
  const BinaryMap merged = union_maps(threshold_map(s_l, opts.theta), threshold_map(s_f, opts.theta));
  const BinaryMap region = largest_region(merged, opts.connectivity);
  if (std::none_of(region.values().begin(), region.values().end(), [](auto b) { return b != 0; })) {
    return {{0.0, 0.0, static_cast<double>(image_dims.width), static_cast<double>(image_dims.height)}, true};
  }
  return {region_bbox(region, image_dims), false};
}

}  // namespace localize
}  // namespace camforge

#endif  // CAMFORGE_LOCALIZE_HPP_
